#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/pattern.hpp"

namespace symdyn {

// Explicit torus fundamental domain (Z^d modulo a diagonal lattice).
// "Unbounded component" on the infinite grid = wrap-around on the torus.
struct Torus {
    std::vector<int> dims;

    int d() const { return static_cast<int>(dims.size()); }
    std::size_t size() const {
        std::size_t n = 1;
        for (int x : dims) n *= static_cast<std::size_t>(x);
        return n;
    }
    std::size_t index(const std::vector<int>& v) const {
        std::size_t idx = 0;
        for (int i = 0; i < d(); ++i) {
            int m = v[static_cast<std::size_t>(i)] % dims[static_cast<std::size_t>(i)];
            if (m < 0) m += dims[static_cast<std::size_t>(i)];
            idx = idx * static_cast<std::size_t>(dims[static_cast<std::size_t>(i)]) +
                  static_cast<std::size_t>(m);
        }
        return idx;
    }
    std::vector<int> coords(std::size_t idx) const {
        std::vector<int> v(static_cast<std::size_t>(d()));
        for (int i = d() - 1; i >= 0; --i) {
            v[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(
                                                                  dims[static_cast<std::size_t>(i)]));
            idx /= static_cast<std::size_t>(dims[static_cast<std::size_t>(i)]);
        }
        return v;
    }
    // torus metrics
    int linf(const std::vector<int>& a, const std::vector<int>& b) const;
    int l1(const std::vector<int>& a, const std::vector<int>& b) const;
};

struct DrmVerdict {
    bool member = false;
    int max_component = 0;          // measured m over all colors
    bool wrapped = false;           // some component closes around the torus
    std::optional<std::vector<std::size_t>> violation; // offending component
    int violation_color = -1;
};

// BFS over monochromatic r-jump components (word metric = l1) on the torus,
// with wrap-around detection via coordinate lifts; Member iff every component
// is finite (no wrap) with at most m cells.
DrmVerdict x_drm_check(const PeriodicConfig& c, int r, int m);

// The band coloring: color(v) = max k such that at least k coordinates lie
// within kr of the reference lattice NZ. Requires N > 100(d+1)r.
struct ZdColoring {
    PeriodicConfig config; // colors 0..d
    int d = 0, r = 0, n = 0;
    int measured_m = 0;
};

ZdColoring zd_coloring(int d, int r, int n);

struct NetPartition {
    Torus torus;
    std::vector<std::vector<int>> corners;
    std::vector<int> cell_of; // per torus index, the owning corner
    int max_cell_size = 0;
    int max_cells_touching_ball = 0; // the measured D for the requested r
    bool all_connected = false;
};

// Cone assignment: each point goes to the nearest (torus linf) corner whose
// cone contains it, ties broken by lexicographic displacement. Corners must
// form an R-packing; every point must land in some cone within 2R.
NetPartition corner_partition(const Torus& t, int R, std::vector<std::vector<int>> corners,
                              int ball_r = 1);

// Greedy completion: offsets in (linf norm, lex) order; v+u joins when u is
// already in and the R-packing survives. Result is an R-net when the horizon
// reaches the seed's covering radius.
std::vector<std::vector<int>> greedy_net_completion(const Torus& t, int R,
                                                    std::vector<std::vector<int>> packing,
                                                    int horizon);

// R-packing / R-covering verdicts (torus linf metric).
bool is_packing(const Torus& t, int R, const std::vector<std::vector<int>>& pts);
int covering_radius(const Torus& t, const std::vector<std::vector<int>>& pts);

// Homotopy step on nets: keep X-corners deep in the 0-region of t, Y-corners
// deep in the 1-region, admit Y-corners near the seam, then complete.
// t is given per torus cell; depth is measured on the linf ball of radius R.
std::vector<std::vector<int>> corner_merge(const Torus& t, const std::vector<int>& time_bits,
                                           const std::vector<std::vector<int>>& corners_x,
                                           const std::vector<std::vector<int>>& corners_y, int R);

// A u^r B on a grid (or line) group, computed by the defining formula.
Domain almost_union(const Domain& a, const Domain& b, int r);

} // namespace symdyn
