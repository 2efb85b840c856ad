#include "symdyn/zddim.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>

namespace symdyn {

int Torus::linf(const std::vector<int>& a, const std::vector<int>& b) const {
    int best = 0;
    for (int i = 0; i < d(); ++i) {
        int n = dims[static_cast<std::size_t>(i)];
        int diff = std::abs(((a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) % n + n) % n);
        diff = std::min(diff, n - diff);
        best = std::max(best, diff);
    }
    return best;
}

int Torus::l1(const std::vector<int>& a, const std::vector<int>& b) const {
    int sum = 0;
    for (int i = 0; i < d(); ++i) {
        int n = dims[static_cast<std::size_t>(i)];
        int diff = std::abs(((a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) % n + n) % n);
        diff = std::min(diff, n - diff);
        sum += diff;
    }
    return sum;
}

namespace {

Torus torus_of(const PeriodicConfig& c) {
    if (c.group.kind() != GroupKind::Grid) throw input_error("grid configuration expected");
    return Torus{c.periods};
}

// l1 ball offsets of radius r in dimension d, excluding the origin
std::vector<std::vector<int>> jump_offsets(int d, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> v(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == d) {
            for (int x : v)
                if (x != 0) {
                    out.push_back(v);
                    return;
                }
            return;
        }
        for (int x = -left; x <= left; ++x) {
            v[static_cast<std::size_t>(i)] = x;
            rec(i + 1, left - std::abs(x));
        }
        v[static_cast<std::size_t>(i)] = 0;
    };
    rec(0, r);
    return out;
}

} // namespace

DrmVerdict x_drm_check(const PeriodicConfig& c, int r, int m) {
    Torus t = torus_of(c);
    DrmVerdict verdict;
    std::vector<std::vector<int>> offsets = jump_offsets(t.d(), r);
    std::vector<char> seen(t.size(), 0);
    // lift per visited cell to catch wrap-around: reaching a cell along two
    // different lifts means the component is infinite in the plane
    std::vector<std::vector<int>> lift(t.size());
    for (std::size_t start = 0; start < t.size(); ++start) {
        if (seen[start]) continue;
        int color = c.sym[start];
        std::vector<std::size_t> comp;
        std::queue<std::size_t> q;
        seen[start] = 1;
        lift[start] = t.coords(start);
        q.push(start);
        bool wrapped = false;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            comp.push_back(u);
            std::vector<int> cu = t.coords(u);
            for (const auto& off : offsets) {
                std::vector<int> cv = cu;
                std::vector<int> lifted = lift[u];
                for (int i = 0; i < t.d(); ++i) {
                    cv[static_cast<std::size_t>(i)] += off[static_cast<std::size_t>(i)];
                    lifted[static_cast<std::size_t>(i)] += off[static_cast<std::size_t>(i)];
                }
                std::size_t v = t.index(cv);
                if (c.sym[v] != color) continue;
                if (!seen[v]) {
                    seen[v] = 1;
                    lift[v] = lifted;
                    q.push(v);
                } else if (lift[v] != lifted) {
                    wrapped = true;
                }
            }
        }
        verdict.max_component = std::max(verdict.max_component, static_cast<int>(comp.size()));
        if (wrapped || static_cast<int>(comp.size()) > m) {
            verdict.member = false;
            verdict.wrapped = wrapped;
            verdict.violation = comp;
            verdict.violation_color = color;
            return verdict;
        }
    }
    verdict.member = true;
    return verdict;
}

ZdColoring zd_coloring(int d, int r, int n) {
    if (n <= 100 * (d + 1) * r)
        throw input_error("period " + std::to_string(n) + " too small; need N > 100(d+1)r = " +
                          std::to_string(100 * (d + 1) * r));
    Torus t{std::vector<int>(static_cast<std::size_t>(d), n)};
    std::vector<int> sym(t.size(), 0);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        std::vector<int> v = t.coords(idx);
        // color = max k with at least k coordinates within kr of NZ
        int color = 0;
        for (int k = 1; k <= d; ++k) {
            int close = 0;
            for (int i = 0; i < d; ++i) {
                int x = v[static_cast<std::size_t>(i)] % n;
                int dist = std::min(x, n - x);
                if (dist <= k * r) ++close;
            }
            if (close >= k) color = k;
        }
        sym[idx] = color;
    }
    ZdColoring out;
    out.config = PeriodicConfig::grid_box(d, t.dims, std::move(sym));
    out.d = d;
    out.r = r;
    out.n = n;
    DrmVerdict v = x_drm_check(out.config, r, static_cast<int>(t.size()));
    if (!v.member)
        throw input_error("band coloring has a wrapping component; period too small");
    out.measured_m = v.max_component;
    return out;
}

bool is_packing(const Torus& t, int R, const std::vector<std::vector<int>>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (t.linf(pts[i], pts[j]) < R) return false;
    return true;
}

int covering_radius(const Torus& t, const std::vector<std::vector<int>>& pts) {
    if (pts.empty()) return -1;
    int worst = 0;
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        std::vector<int> v = t.coords(idx);
        int best = t.dims[0];
        for (const auto& p : pts) best = std::min(best, t.linf(v, p));
        worst = std::max(worst, best);
    }
    return worst;
}

NetPartition corner_partition(const Torus& t, int R, std::vector<std::vector<int>> corners,
                              int ball_r) {
    if (corners.empty()) throw input_error("corner set is empty");
    std::sort(corners.begin(), corners.end());
    if (!is_packing(t, R, corners)) throw input_error("corner set is not an R-packing");
    NetPartition np;
    np.torus = t;
    np.corners = corners;
    np.cell_of.assign(t.size(), -1);
    int d = t.d();
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        std::vector<int> u = t.coords(idx);
        int best = -1;
        int best_dist = 0;
        std::vector<int> best_disp;
        for (std::size_t ci = 0; ci < corners.size(); ++ci) {
            // displacement with nonnegative coordinates: the lift of u into
            // the corner's cone, each coordinate reduced mod the torus
            std::vector<int> disp(static_cast<std::size_t>(d));
            int dist = 0;
            for (int i = 0; i < d; ++i) {
                int n = t.dims[static_cast<std::size_t>(i)];
                int x = ((u[static_cast<std::size_t>(i)] - corners[ci][static_cast<std::size_t>(i)]) % n + n) % n;
                disp[static_cast<std::size_t>(i)] = x;
                dist = std::max(dist, x);
            }
            if (best < 0 || dist < best_dist || (dist == best_dist && disp < best_disp)) {
                best = static_cast<int>(ci);
                best_dist = dist;
                best_disp = disp;
            }
        }
        np.cell_of[idx] = best;
    }
    // verify cells are 1-connected and bounded; count distinct cells per ball
    std::vector<int> cell_size(corners.size(), 0);
    for (int c : np.cell_of) ++cell_size[static_cast<std::size_t>(c)];
    np.max_cell_size = *std::max_element(cell_size.begin(), cell_size.end());
    std::vector<char> seen(t.size(), 0);
    np.all_connected = true;
    for (std::size_t ci = 0; ci < corners.size(); ++ci) {
        // BFS inside the cell from the corner point
        std::size_t start = t.index(corners[ci]);
        if (np.cell_of[start] != static_cast<int>(ci)) {
            np.all_connected = false;
            continue;
        }
        int reached = 0;
        std::queue<std::size_t> q;
        q.push(start);
        seen[start] = 1;
        ++reached;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            std::vector<int> cu = t.coords(u);
            for (int i = 0; i < d; ++i)
                for (int step : {-1, 1}) {
                    std::vector<int> cv = cu;
                    cv[static_cast<std::size_t>(i)] += step;
                    std::size_t v = t.index(cv);
                    if (!seen[v] && np.cell_of[v] == static_cast<int>(ci)) {
                        seen[v] = 1;
                        ++reached;
                        q.push(v);
                    }
                }
        }
        if (reached != cell_size[ci]) np.all_connected = false;
    }
    // measured D: distinct cells meeting any l1 ball of radius ball_r
    auto ball = jump_offsets(d, ball_r);
    int worst = 1;
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        std::vector<int> u = t.coords(idx);
        std::vector<int> cells{np.cell_of[idx]};
        for (const auto& off : ball) {
            std::vector<int> v = u;
            for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] += off[static_cast<std::size_t>(i)];
            cells.push_back(np.cell_of[t.index(v)]);
        }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        worst = std::max(worst, static_cast<int>(cells.size()));
    }
    np.max_cells_touching_ball = worst;
    return np;
}

namespace {

// offsets of linf norm <= horizon in (norm, lex) order
std::vector<std::vector<int>> linf_offsets(int d, int horizon) {
    std::vector<std::vector<int>> out;
    std::vector<int> v(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int i, int cap) {
        if (i == d) {
            out.push_back(v);
            return;
        }
        for (int x = -cap; x <= cap; ++x) {
            v[static_cast<std::size_t>(i)] = x;
            rec(i + 1, cap);
        }
        v[static_cast<std::size_t>(i)] = 0;
    };
    rec(0, horizon);
    auto norm = [](const std::vector<int>& w) {
        int n = 0;
        for (int x : w) n = std::max(n, std::abs(x));
        return n;
    };
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        int na = norm(a), nb = norm(b);
        if (na != nb) return na < nb;
        return a < b;
    });
    return out;
}

struct OccupancyGrid {
    const Torus& t;
    std::vector<char> occ;
    explicit OccupancyGrid(const Torus& t) : t(t), occ(t.size(), 0) {}
    bool blocked(const std::vector<int>& p, int R) const {
        // any occupied cell at linf distance < R?
        std::vector<int> v(p.size());
        std::function<bool(int)> rec = [&](int i) -> bool {
            if (i == t.d()) return occ[t.index(v)] != 0;
            for (int x = p[static_cast<std::size_t>(i)] - (R - 1);
                 x <= p[static_cast<std::size_t>(i)] + (R - 1); ++x) {
                v[static_cast<std::size_t>(i)] = x;
                if (rec(i + 1)) return true;
            }
            return false;
        };
        return rec(0);
    }
    void add(const std::vector<int>& p) { occ[t.index(p)] = 1; }
};

} // namespace

std::vector<std::vector<int>> greedy_net_completion(const Torus& t, int R,
                                                    std::vector<std::vector<int>> packing,
                                                    int horizon) {
    std::sort(packing.begin(), packing.end());
    if (!is_packing(t, R, packing)) throw input_error("seed set is not an R-packing");
    if (packing.empty()) throw input_error("seed packing is empty");
    {
        int rho = covering_radius(t, packing);
        if (horizon < rho)
            throw input_error("horizon " + std::to_string(horizon) +
                              " below the seed covering radius " + std::to_string(rho));
    }
    OccupancyGrid grid(t);
    std::vector<std::vector<int>> pts = packing;
    for (const auto& p : pts) grid.add(p);
    for (const auto& off : linf_offsets(t.d(), horizon)) {
        // snapshot: points added during this offset pass wait for later offsets
        std::size_t snapshot = pts.size();
        for (std::size_t i = 0; i < snapshot; ++i) {
            std::vector<int> cand = pts[i];
            for (int j = 0; j < t.d(); ++j)
                cand[static_cast<std::size_t>(j)] += off[static_cast<std::size_t>(j)];
            // normalize to fundamental coordinates
            cand = t.coords(t.index(cand));
            if (!grid.blocked(cand, R)) {
                grid.add(cand);
                pts.push_back(cand);
            }
        }
    }
    int rho = covering_radius(t, pts);
    if (rho > R) {
        // find an uncovered point for the error message
        for (std::size_t idx = 0; idx < t.size(); ++idx) {
            std::vector<int> v = t.coords(idx);
            int best = t.dims[0];
            for (const auto& p : pts) best = std::min(best, t.linf(v, p));
            if (best > R)
                throw input_error("completion left (" + std::to_string(v[0]) + "," +
                                  std::to_string(v[static_cast<std::size_t>(t.d() - 1)]) +
                                  ") uncovered; horizon too small");
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::vector<std::vector<int>> corner_merge(const Torus& t, const std::vector<int>& time_bits,
                                           const std::vector<std::vector<int>>& corners_x,
                                           const std::vector<std::vector<int>>& corners_y, int R) {
    if (time_bits.size() != t.size()) throw input_error("time pattern size mismatch");
    if (!is_packing(t, R, corners_x) || !is_packing(t, R, corners_y))
        throw input_error("corner sets must be R-packings");
    // depth test on the linf ball of radius R around a corner
    auto region = [&](const std::vector<int>& p, int want) {
        std::vector<int> v(p.size());
        std::function<bool(int)> rec = [&](int i) -> bool {
            if (i == t.d()) return time_bits[t.index(v)] == want;
            for (int x = p[static_cast<std::size_t>(i)] - R; x <= p[static_cast<std::size_t>(i)] + R; ++x) {
                v[static_cast<std::size_t>(i)] = x;
                if (!rec(i + 1)) return false;
            }
            return true;
        };
        return rec(0);
    };
    OccupancyGrid grid(t);
    std::vector<std::vector<int>> pts;
    auto try_add = [&](const std::vector<int>& p) {
        if (!grid.blocked(p, R)) {
            grid.add(p);
            pts.push_back(p);
        }
    };
    std::vector<std::vector<int>> cx = corners_x, cy = corners_y;
    std::sort(cx.begin(), cx.end());
    std::sort(cy.begin(), cy.end());
    for (const auto& p : cx)
        if (region(p, 0)) try_add(p);
    for (const auto& p : cy)
        if (region(p, 1)) try_add(p);
    // seam repair: admit remaining Y-corners that are not deep in 0-territory
    for (const auto& p : cy)
        if (!region(p, 0)) try_add(p);
    if (pts.empty()) throw input_error("merge produced an empty packing");
    std::sort(pts.begin(), pts.end());
    int horizon = covering_radius(t, pts);
    return greedy_net_completion(t, R, pts, horizon);
}

Domain almost_union(const Domain& a, const Domain& b, int r) {
    const Group& g = a.group();
    if (g.kind() == GroupKind::Free) throw input_error("almost-union needs the line or a grid");
    Domain br = ball(g, r);
    Domain abr = a.product(br);
    Domain bbr = b.product(br);
    Domain frontier = abr.intersect(bbr);
    return a.interior(r).unioned(b.interior(r)).unioned(a.unioned(b).minus(frontier));
}

} // namespace symdyn
