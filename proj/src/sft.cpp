#include "symdyn/sft.hpp"

#include <algorithm>

#include "symdyn/glue.hpp"
#include "symdyn/onedim.hpp"

namespace symdyn {

Sft::Sft(Group g, Alphabet a, Domain w, std::vector<std::vector<int>> forb,
         std::string builtin_tag)
    : group(g), alphabet(std::move(a)), window(std::move(w)), forbidden(std::move(forb)),
      builtin(std::move(builtin_tag)) {
    if (alphabet.size() <= 0) throw input_error("alphabet must be nonempty");
    if (!window.contains(group.identity()))
        throw input_error("window must contain the identity");
    for (const auto& f : forbidden)
        if (f.size() != window.size()) throw input_error("forbidden pattern domain != window");
    std::sort(forbidden.begin(), forbidden.end());
    forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
}

bool Sft::is_forbidden(const std::vector<int>& wpat) const {
    return std::binary_search(forbidden.begin(), forbidden.end(), wpat);
}

bool Sft::forced_forbidden(const std::vector<int>& partial) const {
    if (forbidden.empty()) return false;
    // exists_valid(i, [lo,hi)): some completion of positions >= i escapes the
    // forbidden entries sharing the processed prefix
    int nsym = alphabet.size();
    std::function<bool(std::size_t, std::size_t, std::size_t)> exists_valid =
        [&](std::size_t i, std::size_t lo, std::size_t hi) -> bool {
        if (lo == hi) return true;
        if (i == window.size()) return false;
        auto narrow = [&](int s, std::size_t& nlo, std::size_t& nhi) {
            auto cmp_lo = [&](const std::vector<int>& f, int v) { return f[i] < v; };
            auto cmp_hi = [&](int v, const std::vector<int>& f) { return v < f[i]; };
            nlo = static_cast<std::size_t>(
                std::lower_bound(forbidden.begin() + static_cast<long>(lo),
                                 forbidden.begin() + static_cast<long>(hi), s, cmp_lo) -
                forbidden.begin());
            nhi = static_cast<std::size_t>(
                std::upper_bound(forbidden.begin() + static_cast<long>(nlo),
                                 forbidden.begin() + static_cast<long>(hi), s, cmp_hi) -
                forbidden.begin());
        };
        if (partial[i] >= 0) {
            std::size_t nlo, nhi;
            narrow(partial[i], nlo, nhi);
            return exists_valid(i + 1, nlo, nhi);
        }
        for (int s = 0; s < nsym; ++s) {
            std::size_t nlo, nhi;
            narrow(s, nlo, nhi);
            if (exists_valid(i + 1, nlo, nhi)) return true;
        }
        return false;
    };
    return !exists_valid(0, 0, forbidden.size());
}

Sft full_shift(const Group& g, int alphabet_size) {
    return Sft(g, Alphabet::indexed(alphabet_size), Domain(g, {g.identity()}), {});
}

Sft golden_mean() {
    Group g = Group::line();
    return Sft(g, Alphabet::binary(), interval(0, 1), {{1, 1}});
}

bool locally_valid(const Sft& x, const Pattern& p) {
    for (int s : p.sym)
        if (s < 0 || s >= x.alphabet.size()) throw input_error("symbol out of alphabet");
    if (x.forbidden.empty()) return true;
    // every window translate meeting the domain; partially covered windows
    // reject when all their completions are forbidden
    Domain positions = p.dom.product(x.window.inverse());
    std::vector<int> wpat(x.window.size());
    for (const Elem& a : positions.cells()) {
        bool complete = true;
        for (std::size_t i = 0; i < x.window.size(); ++i) {
            int j = p.dom.index_of(x.group.mul(a, x.window[i]));
            if (j < 0) {
                complete = false;
                wpat[i] = -1;
            } else {
                wpat[i] = p.sym[static_cast<std::size_t>(j)];
            }
        }
        if (complete ? x.is_forbidden(wpat) : x.forced_forbidden(wpat)) return false;
    }
    return true;
}

bool locally_valid(const Sft& x, const PeriodicConfig& c) {
    if (x.forbidden.empty()) return true;
    // check every window translate anchored at a fundamental-domain cell
    std::vector<int> wpat(x.window.size());
    switch (x.group.kind()) {
        case GroupKind::Line: {
            int p = c.periods[0];
            for (int i = 0; i < p; ++i) {
                for (std::size_t k = 0; k < x.window.size(); ++k)
                    wpat[k] = c.at(line_elem(i + x.window[k].v[0]));
                if (x.is_forbidden(wpat)) return false;
            }
            return true;
        }
        case GroupKind::Grid: {
            std::vector<int> v(x.group.rank(), 0);
            std::function<bool(int)> rec = [&](int dim) -> bool {
                if (dim == x.group.rank()) {
                    Elem a{v};
                    for (std::size_t k = 0; k < x.window.size(); ++k)
                        wpat[k] = c.at(x.group.mul(a, x.window[k]));
                    return !x.is_forbidden(wpat);
                }
                for (v[dim] = 0; v[dim] < c.periods[dim]; ++v[dim])
                    if (!rec(dim + 1)) return false;
                v[dim] = 0;
                return true;
            };
            return rec(0);
        }
        case GroupKind::Free: {
            // one check per quotient vertex: walk the window from each vertex
            for (int v0 = 0; v0 < c.degree; ++v0) {
                for (std::size_t k = 0; k < x.window.size(); ++k) {
                    int v = v0;
                    for (int letter : x.window[k].v) {
                        int i = std::abs(letter) - 1;
                        if (letter > 0)
                            v = c.perms[i][v];
                        else {
                            int u = 0;
                            while (c.perms[i][u] != v) ++u;
                            v = u;
                        }
                    }
                    wpat[k] = c.sym[static_cast<std::size_t>(v)];
                }
                if (x.is_forbidden(wpat)) return false;
            }
            return true;
        }
    }
    return true;
}

namespace {

struct LocalEnum {
    const Sft& x;
    const Domain& d;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    std::vector<int> sym;
    // per cell: window translates that become fully assigned at this cell
    // (list of (cell indices into d, canonical order) per translate)
    std::vector<std::vector<std::vector<int>>> checks;

    LocalEnum(const Sft& x, const Domain& d, std::uint64_t budget) : x(x), d(d), budget(budget) {
        sym.assign(d.size(), -1);
        checks.resize(d.size());
        if (!x.forbidden.empty()) {
            Domain positions = d.product(x.window.inverse());
            for (const Elem& a : positions.cells()) {
                std::vector<int> idx;
                idx.reserve(x.window.size());
                bool inside = true;
                int last = -1;
                for (const Elem& w : x.window.cells()) {
                    int j = d.index_of(x.group.mul(a, w));
                    if (j < 0) {
                        inside = false;
                        break;
                    }
                    idx.push_back(j);
                    last = std::max(last, j);
                }
                if (inside) checks[static_cast<std::size_t>(last)].push_back(std::move(idx));
            }
        }
    }

    bool ok_at(std::size_t cell) {
        std::vector<int> wpat(x.window.size());
        for (const auto& idx : checks[cell]) {
            for (std::size_t k = 0; k < idx.size(); ++k)
                wpat[k] = sym[static_cast<std::size_t>(idx[k])];
            if (x.is_forbidden(wpat)) return false;
        }
        return true;
    }

    void run(std::size_t cell, const std::function<void(const Pattern&)>& yield) {
        if (cell == d.size()) {
            Pattern p(d, sym);
            if (locally_valid(x, p)) yield(p); // boundary windows check partially
            return;
        }
        for (int s = 0; s < x.alphabet.size(); ++s) {
            if (++nodes > budget) throw budget_error("pattern enumeration exceeded budget", budget);
            sym[cell] = s;
            if (ok_at(cell)) run(cell + 1, yield);
        }
        sym[cell] = -1;
    }
};

} // namespace

void enumerate_locally_valid(const Sft& x, const Domain& d,
                             const std::function<void(const Pattern&)>& yield,
                             std::uint64_t budget) {
    if (d.group() != x.group) throw input_error("domain group mismatch");
    LocalEnum e(x, d, budget);
    if (d.empty()) {
        yield(Pattern(d, {}));
        return;
    }
    e.run(0, yield);
}

std::vector<Pattern> collect_locally_valid(const Sft& x, const Domain& d, std::uint64_t budget) {
    std::vector<Pattern> out;
    enumerate_locally_valid(x, d, [&](const Pattern& p) { out.push_back(p); }, budget);
    return out;
}

std::uint64_t count_locally_valid(const Sft& x, const Domain& d, std::uint64_t budget) {
    std::uint64_t n = 0;
    enumerate_locally_valid(x, d, [&](const Pattern&) { ++n; }, budget);
    return n;
}

namespace {

// Bounded oracle: search a locally valid total extension of p on dom*B_margin.
Validity bounded_valid(const Sft& x, const Pattern& p, int margin, std::uint64_t budget) {
    Domain ext = p.dom.product(ball(x.group, margin));
    // DFS over unassigned cells with incremental window checks
    std::vector<int> sym(ext.size(), -1);
    for (std::size_t i = 0; i < p.dom.size(); ++i) {
        int j = ext.index_of(p.dom[i]);
        sym[static_cast<std::size_t>(j)] = p.sym[i];
    }
    // window translates fully inside ext
    std::vector<std::vector<int>> translates;
    if (!x.forbidden.empty()) {
        Domain positions = ext.product(x.window.inverse());
        for (const Elem& a : positions.cells()) {
            std::vector<int> idx;
            bool inside = true;
            for (const Elem& w : x.window.cells()) {
                int j = ext.index_of(x.group.mul(a, w));
                if (j < 0) {
                    inside = false;
                    break;
                }
                idx.push_back(j);
            }
            if (inside) translates.push_back(std::move(idx));
        }
    }
    auto window_ok = [&](const std::vector<int>& idx) {
        std::vector<int> wpat(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            int s = sym[static_cast<std::size_t>(idx[k])];
            if (s < 0) return true; // not yet determined
            wpat[k] = s;
        }
        return !x.is_forbidden(wpat);
    };
    for (const auto& t : translates)
        if (!window_ok(t)) return {Verdict3::Invalid, margin, "pinned cells already invalid"};

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < ext.size(); ++i)
        if (sym[i] < 0) order.push_back(i);
    // per-cell list of translates touching it
    std::vector<std::vector<int>> touching(ext.size());
    for (std::size_t t = 0; t < translates.size(); ++t)
        for (int j : translates[t]) touching[static_cast<std::size_t>(j)].push_back(static_cast<int>(t));

    std::uint64_t nodes = 0;
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
        if (k == order.size()) return true;
        std::size_t cell = order[k];
        for (int s = 0; s < x.alphabet.size(); ++s) {
            if (++nodes > budget) throw budget_error("bounded validity search exceeded budget", budget);
            sym[cell] = s;
            bool ok = true;
            for (int t : touching[cell])
                if (!window_ok(translates[static_cast<std::size_t>(t)])) {
                    ok = false;
                    break;
                }
            if (ok && rec(k + 1)) return true;
        }
        sym[cell] = -1;
        return false;
    };
    try {
        if (rec(0)) return {Verdict3::Valid, margin, "locally valid extension found"};
        return {Verdict3::Invalid, margin, "no locally valid extension"};
    } catch (const budget_error&) {
        return {Verdict3::Unknown, margin, "extension budget exhausted"};
    }
}

} // namespace

Validity globally_valid(const Sft& x, const Pattern& p, GvMethod method, int margin,
                        std::uint64_t budget) {
    for (int s : p.sym)
        if (s < 0 || s >= x.alphabet.size()) throw input_error("symbol out of alphabet");
    switch (method) {
        case GvMethod::Exact1d:
            if (x.group.kind() != GroupKind::Line)
                throw input_error("exact_1d requires the line group");
            return exact_valid_1d(x, p);
        case GvMethod::CocycleExact:
            if (x.builtin != "cocycle")
                throw input_error("cocycle_exact requires the builtin cocycle SFT");
            return cocycle_exact_valid(x, p);
        case GvMethod::Bounded:
            if (!locally_valid(x, p)) return {Verdict3::Invalid, margin, "locally invalid"};
            return bounded_valid(x, p, margin, budget);
    }
    return {Verdict3::Unknown, -1, ""};
}

Validity globally_valid_auto(const Sft& x, const Pattern& p, int margin, std::uint64_t budget) {
    if (x.group.kind() == GroupKind::Line) return globally_valid(x, p, GvMethod::Exact1d);
    if (x.builtin == "cocycle") return globally_valid(x, p, GvMethod::CocycleExact);
    return globally_valid(x, p, GvMethod::Bounded, margin, budget);
}

Sft sft_approximation(const std::function<bool(const Pattern&)>& in_language, const Group& g,
                      const Alphabet& alphabet, const Domain& w) {
    std::vector<std::vector<int>> forb;
    std::vector<int> sym(w.size(), 0);
    // enumerate all window patterns in canonical order
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == w.size()) {
            Pattern p(w, sym);
            if (!in_language(p)) forb.push_back(sym);
            return;
        }
        for (int s = 0; s < alphabet.size(); ++s) {
            sym[i] = s;
            rec(i + 1);
        }
        sym[i] = 0;
    };
    rec(0);
    return Sft(g, alphabet, w, std::move(forb));
}

} // namespace symdyn
