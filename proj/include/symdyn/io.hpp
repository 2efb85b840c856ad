#pragma once

#include <string>

#include <json.hpp>

#include "symdyn/glue.hpp"
#include "symdyn/onedim.hpp"

namespace symdyn {

using ordered_json = nlohmann::ordered_json;

// ---- SFT text format ----------------------------------------------------
// {
//   "group":     {"kind": "line" | "grid" | "free", "rank": 2},
//   "alphabet":  ["0", "1"],            (or "tracks": [[...], [...]])
//   "window":    ["0", "1"],            element syntax per group, see docs
//   "forbidden": [{"0": "1", "1": "1"}],
//   "builtin":   "cocycle"              optional tag
// }
ordered_json sft_to_json(const Sft& x);
Sft sft_from_json(const ordered_json& j);

ordered_json group_to_json(const Group& g);
Group group_from_json(const ordered_json& j);

ordered_json pattern_to_json(const Group& g, const Alphabet& a, const Pattern& p);
Pattern pattern_from_json(const Group& g, const Alphabet& a, const ordered_json& j);

// ---- block map format ---------------------------------------------------
// Either an explicit rule table or a builtin descriptor (name + parameters,
// possibly with children); both round-trip.
ordered_json blockmap_to_json(const BlockMap& f);
BlockMap blockmap_from_json(const ordered_json& j);

// ---- homotopy descriptor ------------------------------------------------
// {"builtin": "safe_symbol" | "naive" | "burton_steif" | "coloring" | "z0"
//             | "mixing",
//  parameters..., "sft": {...} when the construction starts from an SFT}
// Endpoints are the two configuration-track projections.
struct HomotopyBundle {
    Sft space;
    Homotopy homotopy;
    std::string name;
};
ordered_json homotopy_to_json(const HomotopyBundle& h);
HomotopyBundle homotopy_from_json(const ordered_json& j);

// ---- reports --------------------------------------------------------------
ordered_json report_skeleton(const std::string& command, const ordered_json& params);
ordered_json check_result_to_json(const CheckResult& r, const Group& g, const Alphabet& src,
                                  const Alphabet& tgt);
ordered_json contraction_report_to_json(const ContractionReport& r, const Homotopy& h);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// ---- plotting -------------------------------------------------------------
// Portable raster/vector emitters, no external dependencies.
void write_ppm(const std::string& path, int width, int height,
               const std::function<std::array<unsigned char, 3>(int, int)>& pixel);
void write_grid_coloring_ppm(const std::string& path, const PeriodicConfig& c, int scale = 1);
void write_line_sweep_ppm(const std::string& path, const Homotopy& h,
                          const std::vector<int>& xw, const std::vector<int>& yw, int steps);
void write_grid_coloring_svg(const std::string& path, const PeriodicConfig& c, int scale = 8);

} // namespace symdyn
