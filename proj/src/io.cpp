#include "symdyn/io.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace symdyn {

ordered_json group_to_json(const Group& g) {
    ordered_json j;
    switch (g.kind()) {
        case GroupKind::Line: j["kind"] = "line"; break;
        case GroupKind::Grid: j["kind"] = "grid"; break;
        case GroupKind::Free: j["kind"] = "free"; break;
    }
    j["rank"] = g.rank();
    return j;
}

Group group_from_json(const ordered_json& j) {
    std::string kind = j.at("kind").get<std::string>();
    int rank = j.value("rank", 1);
    if (kind == "line") return Group::line();
    if (kind == "grid") return Group::grid(rank);
    if (kind == "free") return Group::free_group(rank);
    throw parse_error("unknown group kind: " + kind);
}

namespace {

std::string elem_string(const Group& g, const Elem& e) { return g.show(e); }

Elem elem_parse(const Group& g, const ordered_json& j) {
    if (j.is_number_integer()) {
        if (g.kind() != GroupKind::Line) throw parse_error("integer element in non-line group");
        return line_elem(j.get<int>());
    }
    if (j.is_array()) {
        if (g.kind() != GroupKind::Grid) throw parse_error("vector element in non-grid group");
        std::vector<int> c = j.get<std::vector<int>>();
        Elem e{c};
        g.check_elem(e);
        return e;
    }
    return g.parse(j.get<std::string>());
}

ordered_json alphabet_to_json(const Alphabet& a) {
    if (a.num_tracks() == 1) return ordered_json(a.tracks[0]);
    ordered_json j = ordered_json::array();
    for (const auto& t : a.tracks) j.push_back(t);
    return j;
}

int symbol_index(const Alphabet& a, const std::string& name) {
    // single-track lookup by name; multi-track names use "|" separators
    if (a.num_tracks() == 1) {
        for (int i = 0; i < a.size(); ++i)
            if (a.tracks[0][static_cast<std::size_t>(i)] == name) return i;
        throw parse_error("unknown symbol: " + name);
    }
    std::vector<int> parts;
    std::size_t start = 0;
    for (int t = 0; t < a.num_tracks(); ++t) {
        std::size_t bar = name.find('|', start);
        std::string piece = name.substr(start, bar == std::string::npos ? std::string::npos
                                                                        : bar - start);
        int found = -1;
        for (int i = 0; i < a.track_size(t); ++i)
            if (a.tracks[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] == piece)
                found = i;
        if (found < 0) throw parse_error("unknown symbol piece: " + piece);
        parts.push_back(found);
        start = bar == std::string::npos ? name.size() : bar + 1;
    }
    return a.flatten(parts);
}

std::string symbol_name(const Alphabet& a, int flat) {
    if (a.num_tracks() == 1) return a.tracks[0][static_cast<std::size_t>(flat)];
    std::string s;
    std::vector<int> parts = a.unflatten(flat);
    for (int t = 0; t < a.num_tracks(); ++t) {
        if (t) s += "|";
        s += a.tracks[static_cast<std::size_t>(t)][static_cast<std::size_t>(parts[static_cast<std::size_t>(t)])];
    }
    return s;
}

} // namespace

ordered_json sft_to_json(const Sft& x) {
    ordered_json j;
    j["group"] = group_to_json(x.group);
    if (x.alphabet.num_tracks() == 1)
        j["alphabet"] = alphabet_to_json(x.alphabet);
    else
        j["tracks"] = alphabet_to_json(x.alphabet);
    ordered_json win = ordered_json::array();
    for (const Elem& e : x.window.cells()) win.push_back(elem_string(x.group, e));
    j["window"] = win;
    ordered_json forb = ordered_json::array();
    for (const auto& f : x.forbidden) {
        ordered_json pat = ordered_json::object();
        for (std::size_t i = 0; i < x.window.size(); ++i)
            pat[elem_string(x.group, x.window[i])] = symbol_name(x.alphabet, f[i]);
        forb.push_back(pat);
    }
    j["forbidden"] = forb;
    if (!x.builtin.empty()) j["builtin"] = x.builtin;
    return j;
}

Sft sft_from_json(const ordered_json& j) {
    Group g = group_from_json(j.at("group"));
    Alphabet a;
    if (j.contains("alphabet"))
        a = Alphabet::single(j.at("alphabet").get<std::vector<std::string>>());
    else {
        for (const auto& t : j.at("tracks")) a.tracks.push_back(t.get<std::vector<std::string>>());
    }
    std::vector<Elem> wcells;
    for (const auto& e : j.at("window")) wcells.push_back(elem_parse(g, e));
    Domain w(g, wcells);
    std::vector<std::vector<int>> forb;
    for (const auto& pat : j.value("forbidden", ordered_json::array())) {
        std::vector<int> f(w.size(), -1);
        for (auto it = pat.begin(); it != pat.end(); ++it) {
            Elem cell = g.parse(it.key());
            int idx = w.index_of(cell);
            if (idx < 0) throw parse_error("forbidden pattern cell outside window: " + it.key());
            f[static_cast<std::size_t>(idx)] = symbol_index(a, it.value().get<std::string>());
        }
        for (int v : f)
            if (v < 0) throw parse_error("forbidden pattern does not cover the window");
        forb.push_back(f);
    }
    return Sft(g, a, w, std::move(forb), j.value("builtin", std::string{}));
}

ordered_json pattern_to_json(const Group& g, const Alphabet& a, const Pattern& p) {
    ordered_json j = ordered_json::object();
    for (std::size_t i = 0; i < p.dom.size(); ++i)
        j[elem_string(g, p.dom[i])] = symbol_name(a, p.sym[i]);
    return j;
}

Pattern pattern_from_json(const Group& g, const Alphabet& a, const ordered_json& j) {
    std::vector<Elem> cells;
    std::vector<std::pair<Elem, int>> entries;
    for (auto it = j.begin(); it != j.end(); ++it) {
        Elem e = g.parse(it.key());
        cells.push_back(e);
        entries.push_back({e, symbol_index(a, it.value().get<std::string>())});
    }
    Domain d(g, cells);
    std::vector<int> sym(d.size());
    for (const auto& [e, v] : entries) sym[static_cast<std::size_t>(d.index_of(e))] = v;
    return Pattern(d, sym);
}

ordered_json blockmap_to_json(const BlockMap& f) {
    ordered_json j;
    j["group"] = group_to_json(f.group);
    j["source"] = alphabet_to_json(f.source);
    j["target"] = alphabet_to_json(f.target);
    ordered_json nb = ordered_json::array();
    for (const Elem& e : f.nbhd.cells()) nb.push_back(elem_string(f.group, e));
    j["neighborhood"] = nb;
    if (!f.desc) throw input_error("block map has no serializable description");
    std::function<ordered_json(const BlockMap&)> desc_json = [&](const BlockMap& m) {
        ordered_json d;
        d["kind"] = m.desc->kind;
        if (!m.desc->params.empty()) d["params"] = m.desc->params;
        if (!m.desc->table.empty()) d["table"] = m.desc->table;
        if (!m.desc->children.empty()) {
            ordered_json ch = ordered_json::array();
            for (const BlockMap& c : m.desc->children) ch.push_back(blockmap_to_json(c));
            d["children"] = ch;
        }
        return d;
    };
    j["rule"] = desc_json(f);
    return j;
}

BlockMap blockmap_from_json(const ordered_json& j) {
    Group g = group_from_json(j.at("group"));
    auto parse_alpha = [&](const ordered_json& a) {
        Alphabet out;
        if (a.empty() || a[0].is_string())
            out = Alphabet::single(a.get<std::vector<std::string>>());
        else
            for (const auto& t : a) out.tracks.push_back(t.get<std::vector<std::string>>());
        return out;
    };
    Alphabet source = parse_alpha(j.at("source"));
    Alphabet target = parse_alpha(j.at("target"));
    std::vector<Elem> nb;
    for (const auto& e : j.at("neighborhood")) nb.push_back(elem_parse(g, e));
    Domain nbhd(g, nb);
    const ordered_json& rule = j.at("rule");
    std::string kind = rule.at("kind").get<std::string>();
    if (kind == "table") return table_map(g, source, target, nbhd, rule.at("table").get<std::vector<int>>());
    if (kind == "identity") return identity_map(g, source);
    if (kind == "projection") {
        int b = std::stoi(rule.at("params").at("begin").get<std::string>());
        int e = std::stoi(rule.at("params").at("end").get<std::string>());
        return projection_map(g, source, b, e);
    }
    if (kind == "constant") {
        int s = std::stoi(rule.at("params").at("symbol").get<std::string>());
        return constant_map(g, source, target, s);
    }
    if (kind == "min") return min_map(g, nbhd);
    if (kind == "max") return max_map(g, nbhd);
    if (kind == "compose") {
        std::vector<BlockMap> ch;
        for (const auto& c : rule.at("children")) ch.push_back(blockmap_from_json(c));
        if (ch.size() != 2) throw parse_error("compose takes two children");
        return compose(ch[0], ch[1]);
    }
    if (kind == "product") {
        std::vector<BlockMap> ch;
        for (const auto& c : rule.at("children")) ch.push_back(blockmap_from_json(c));
        return product(ch);
    }
    if (kind == "edge_difference") return cocycle_sft().second;
    throw parse_error("block map rule kind not deserializable: " + kind);
}

ordered_json homotopy_to_json(const HomotopyBundle& h) {
    ordered_json j;
    j["builtin"] = h.name;
    if (!h.homotopy.map.desc) throw input_error("homotopy has no description");
    const MapDesc& d = *h.homotopy.map.desc;
    if (!d.params.empty()) j["params"] = d.params;
    j["sft"] = sft_to_json(h.space);
    j["endpoints"] = {{"left", "first configuration track"},
                      {"right", "second configuration track"}};
    return j;
}

HomotopyBundle homotopy_from_json(const ordered_json& j) {
    HomotopyBundle b;
    b.name = j.at("builtin").get<std::string>();
    auto param = [&](const std::string& key) {
        return std::stoi(j.at("params").at(key).get<std::string>());
    };
    if (b.name == "naive") {
        b.space = sft_from_json(j.at("sft"));
        b.homotopy = naive_contraction(b.space);
    } else if (b.name == "safe_symbol") {
        b.space = sft_from_json(j.at("sft"));
        b.homotopy = safe_symbol_homotopy(b.space, param("safe"));
    } else if (b.name == "burton_steif") {
        Group g = group_from_json(j.at("group"));
        auto [sft, h] = burton_steif(g, param("M"));
        b.space = sft;
        b.homotopy = h;
    } else if (b.name == "coloring") {
        Group g = group_from_json(j.at("group"));
        auto [sft, h] = coloring_homotopy(g, param("colors"));
        b.space = sft;
        b.homotopy = h;
    } else if (b.name == "z0") {
        b.space = sft_from_json(j.at("sft"));
        b.homotopy = z0_homotopy(b.space, param("zero"));
    } else if (b.name == "mixing") {
        Sft x = sft_from_json(j.at("sft"));
        MixingHomotopy mh = mixing_contraction_homotopy(x);
        b.space = mh.recode.vertex_sft;
        b.homotopy = mh.homotopy;
    } else {
        throw parse_error("unknown homotopy builtin: " + b.name);
    }
    return b;
}

ordered_json report_skeleton(const std::string& command, const ordered_json& params) {
    ordered_json j;
    j["tool"] = "symdyn";
    j["version"] = kVersion;
    j["command"] = command;
    j["params"] = params;
    return j;
}

namespace {
const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Proved: return "proved";
        case CheckStatus::Counterexample: return "counterexample";
        case CheckStatus::Unknown: return "unknown";
    }
    return "?";
}
} // namespace

ordered_json check_result_to_json(const CheckResult& r, const Group& g, const Alphabet& src,
                                  const Alphabet& tgt) {
    ordered_json j;
    j["status"] = status_name(r.status);
    j["margin"] = r.margin;
    j["nodes"] = r.nodes;
    if (!r.note.empty()) j["note"] = r.note;
    if (r.witness) {
        j["witness"]["input"] = pattern_to_json(g, src, r.witness->input);
        j["witness"]["output"] = pattern_to_json(g, tgt, r.witness->output);
        const Validity& v = r.witness->confirmation;
        j["witness"]["confirmed"] = v.v == Verdict3::Valid;
        j["witness"]["confirmation_note"] = v.note;
    }
    return j;
}

ordered_json contraction_report_to_json(const ContractionReport& r, const Homotopy& h) {
    ordered_json j;
    j["status"] = status_name(r.status);
    if (!r.failed_stage.empty()) j["stage"] = r.failed_stage;
    const Group& g = h.map.group;
    j["endpoint_left"] = check_result_to_json(r.endpoint_left, g, h.map.source, h.map.target);
    j["endpoint_right"] = check_result_to_json(r.endpoint_right, g, h.map.source, h.map.target);
    j["into"] = check_result_to_json(r.into, g, h.map.source, h.map.target);
    if (r.diagonal_checked)
        j["diagonal"] = check_result_to_json(r.diagonal, g, h.map.source, h.map.target);
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write " + path);
    out << content;
}

void write_ppm(const std::string& path, int width, int height,
               const std::function<std::array<unsigned char, 3>(int, int)>& pixel) {
    std::ostringstream ss;
    ss << "P6\n" << width << " " << height << "\n255\n";
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            auto rgb = pixel(x, y);
            ss.write(reinterpret_cast<const char*>(rgb.data()), 3);
        }
    write_file(path, ss.str());
}

namespace {
std::array<unsigned char, 3> palette(int i) {
    static const std::array<std::array<unsigned char, 3>, 8> colors = {{
        {{230, 230, 230}}, {{31, 119, 180}}, {{255, 127, 14}}, {{44, 160, 44}},
        {{214, 39, 40}}, {{148, 103, 189}}, {{140, 86, 75}}, {{227, 119, 194}},
    }};
    return colors[static_cast<std::size_t>(i) % colors.size()];
}
} // namespace

void write_grid_coloring_ppm(const std::string& path, const PeriodicConfig& c, int scale) {
    if (c.group.kind() != GroupKind::Grid || c.group.rank() != 2)
        throw input_error("grid(2) configuration expected");
    int w = c.periods[0], h = c.periods[1];
    write_ppm(path, w * scale, h * scale, [&](int x, int y) {
        return palette(c.at(grid_elem({x / scale, y / scale})));
    });
}

void write_line_sweep_ppm(const std::string& path, const Homotopy& h, const std::vector<int>& xw,
                          const std::vector<int>& yw, int steps) {
    // rows: time parameter sweeping a growing block of 1s across the window
    int width = static_cast<int>(xw.size());
    PeriodicConfig xc = PeriodicConfig::line_word(xw);
    PeriodicConfig yc = PeriodicConfig::line_word(yw);
    std::vector<std::vector<int>> rows;
    for (int row = 0; row <= steps; ++row) {
        int cut = row * width / std::max(steps, 1);
        std::vector<int> tward(static_cast<std::size_t>(width), 0);
        for (int i = 0; i < cut; ++i) tward[static_cast<std::size_t>(i)] = 1;
        PeriodicConfig tc = PeriodicConfig::line_word(tward);
        // combine the three tracks into one periodic configuration
        int period = width;
        std::vector<int> combined(static_cast<std::size_t>(period));
        for (int i = 0; i < period; ++i) {
            std::vector<int> parts = {tc.at(line_elem(i)), xc.at(line_elem(i)),
                                      yc.at(line_elem(i))};
            combined[static_cast<std::size_t>(i)] = h.map.source.flatten(parts);
        }
        PeriodicConfig joint;
        joint.group = Group::line();
        joint.periods = {period};
        joint.sym = combined;
        PeriodicConfig out = apply(h.map, joint);
        rows.push_back(out.sym);
    }
    write_ppm(path, width, static_cast<int>(rows.size()), [&](int x, int y) {
        return palette(rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] + 1);
    });
}

void write_grid_coloring_svg(const std::string& path, const PeriodicConfig& c, int scale) {
    if (c.group.kind() != GroupKind::Grid || c.group.rank() != 2)
        throw input_error("grid(2) configuration expected");
    int w = c.periods[0], h = c.periods[1];
    std::ostringstream ss;
    ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale << "\" height=\""
       << h * scale << "\">\n";
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto rgb = palette(c.at(grid_elem({x, y})));
            ss << "<rect x=\"" << x * scale << "\" y=\"" << y * scale << "\" width=\"" << scale
               << "\" height=\"" << scale << "\" fill=\"rgb(" << int(rgb[0]) << "," << int(rgb[1])
               << "," << int(rgb[2]) << ")\"/>\n";
        }
    ss << "</svg>\n";
    write_file(path, ss.str());
}

} // namespace symdyn
