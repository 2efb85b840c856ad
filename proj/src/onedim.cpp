#include "symdyn/onedim.hpp"

#include <algorithm>
#include <numeric>

namespace symdyn {

namespace {

// Lift the window to its interval hull [0, L-1] (L >= 2): forbid every hull
// word whose restriction to the window matches a forbidden pattern.
struct HullSft {
    int len; // L
    int nsym;
    std::vector<char> forbidden; // indexed by mixed-radix hull word
};

HullSft hull_lift(const Sft& x) {
    if (x.group.kind() != GroupKind::Line) throw input_error("line SFT expected");
    int lo = x.window[0].v[0];
    int hi = x.window[x.window.size() - 1].v[0];
    int len = std::max(hi - lo + 1, 2);
    int nsym = x.alphabet.size();
    std::size_t total = 1;
    for (int i = 0; i < len; ++i) total *= static_cast<std::size_t>(nsym);
    HullSft h{len, nsym, std::vector<char>(total, 0)};
    if (x.forbidden.empty()) return h;
    std::vector<int> offs;
    for (const Elem& e : x.window.cells()) offs.push_back(e.v[0] - lo);
    std::vector<int> word(static_cast<std::size_t>(len), 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == len) {
            std::vector<int> wpat(offs.size());
            for (std::size_t k = 0; k < offs.size(); ++k)
                wpat[k] = word[static_cast<std::size_t>(offs[k])];
            if (x.is_forbidden(wpat)) {
                std::size_t idx = 0;
                for (int j = 0; j < len; ++j)
                    idx = idx * static_cast<std::size_t>(nsym) +
                          static_cast<std::size_t>(word[static_cast<std::size_t>(j)]);
                h.forbidden[idx] = 1;
            }
            return;
        }
        for (int s = 0; s < nsym; ++s) {
            word[static_cast<std::size_t>(i)] = s;
            rec(i + 1);
        }
    };
    rec(0);
    return h;
}

bool hull_forbidden(const HullSft& h, const std::vector<int>& word, std::size_t at) {
    std::size_t idx = 0;
    for (int j = 0; j < h.len; ++j)
        idx = idx * static_cast<std::size_t>(h.nsym) +
              static_cast<std::size_t>(word[at + static_cast<std::size_t>(j)]);
    return h.forbidden[idx] != 0;
}

} // namespace

Recode1d recode_to_vertex_shift(const Sft& x) {
    HullSft h = hull_lift(x);
    int bl = h.len - 1; // block length
    int nsym = h.nsym;

    // enumerate all blocks (words of length bl); vertices are kept blocks
    std::size_t nblocks = 1;
    for (int i = 0; i < bl; ++i) nblocks *= static_cast<std::size_t>(nsym);
    std::vector<std::vector<int>> words;
    words.reserve(nblocks);
    {
        std::vector<int> w(static_cast<std::size_t>(bl), 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == bl) {
                words.push_back(w);
                return;
            }
            for (int s = 0; s < nsym; ++s) {
                w[static_cast<std::size_t>(i)] = s;
                rec(i + 1);
            }
        };
        rec(0);
    }
    auto edge_ok = [&](const std::vector<int>& u, const std::vector<int>& v) {
        for (int i = 0; i + 1 < bl; ++i)
            if (u[static_cast<std::size_t>(i + 1)] != v[static_cast<std::size_t>(i)]) return false;
        std::vector<int> joint = u;
        joint.push_back(v[static_cast<std::size_t>(bl - 1)]);
        return !hull_forbidden(h, joint, 0);
    };

    // iterated pruning of degree-0 vertices
    std::vector<char> alive(words.size(), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (!alive[i]) continue;
            bool has_out = false, has_in = false;
            for (std::size_t j = 0; j < words.size() && !(has_out && has_in); ++j) {
                if (!alive[j]) continue;
                if (!has_out && edge_ok(words[i], words[j])) has_out = true;
                if (!has_in && edge_ok(words[j], words[i])) has_in = true;
            }
            if (!has_out || !has_in) {
                alive[i] = 0;
                changed = true;
            }
        }
    }

    Recode1d r;
    r.block_len = bl;
    TransitionGraph& tg = r.graph;
    std::vector<int> vertex_of(words.size(), -1);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (alive[i]) {
            vertex_of[i] = tg.nvert++;
            tg.block_words.push_back(words[i]);
        }
    }
    tg.adj.assign(static_cast<std::size_t>(tg.nvert),
                  std::vector<char>(static_cast<std::size_t>(tg.nvert), 0));
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (!alive[i]) continue;
        for (std::size_t j = 0; j < words.size(); ++j) {
            if (!alive[j]) continue;
            if (edge_ok(words[i], words[j]))
                tg.adj[static_cast<std::size_t>(vertex_of[i])][static_cast<std::size_t>(vertex_of[j])] = 1;
        }
    }
    tg.essentialized = true;

    // vertex SFT on the line
    Group line = Group::line();
    int nv = std::max(tg.nvert, 1); // empty subshift keeps a one-symbol dead alphabet
    std::vector<std::string> names;
    for (int v = 0; v < nv; ++v) {
        std::string nm;
        if (tg.nvert == 0)
            nm = "dead";
        else
            for (int s : tg.block_words[static_cast<std::size_t>(v)])
                nm += (nm.empty() ? "" : ".") + std::to_string(s);
        names.push_back(nm);
    }
    Alphabet valpha = Alphabet::single(names);
    std::vector<std::vector<int>> forb;
    if (tg.nvert == 0) {
        forb.push_back({0, 0}); // no bi-infinite configurations at all
        for (int a = 0; a < 1; ++a) {
        }
    }
    for (int u = 0; u < tg.nvert; ++u)
        for (int v = 0; v < tg.nvert; ++v)
            if (!tg.edge(u, v)) forb.push_back({u, v});
    r.vertex_sft = Sft(line, valpha, interval(0, 1), std::move(forb));

    // conjugacy maps
    {
        BlockMap phi;
        phi.group = line;
        phi.source = x.alphabet;
        phi.target = valpha;
        phi.nbhd = interval(0, bl - 1);
        // block index lookup
        auto lut = std::make_shared<std::vector<int>>(words.size(), 0);
        for (std::size_t i = 0; i < words.size(); ++i)
            if (vertex_of[i] >= 0) (*lut)[i] = vertex_of[i];
        int nsym_c = nsym;
        int bl_c = bl;
        phi.rule = [lut, nsym_c, bl_c](EvalCtx& ctx, const Elem& at) -> int {
            std::size_t idx = 0;
            for (int i = 0; i < bl_c; ++i) {
                int v = ctx.get(0, line_elem(at.v[0] + i));
                if (v == kNeed) return kNeed;
                idx = idx * static_cast<std::size_t>(nsym_c) + static_cast<std::size_t>(v);
            }
            return (*lut)[idx];
        };
        auto d = std::make_shared<MapDesc>();
        d->kind = "higher_block";
        d->params["len"] = std::to_string(bl);
        phi.desc = d;
        r.to_vertex = phi;
    }
    {
        BlockMap psi;
        psi.group = line;
        psi.source = valpha;
        psi.target = x.alphabet;
        psi.nbhd = interval(0, 0);
        auto first = std::make_shared<std::vector<int>>();
        for (int v = 0; v < tg.nvert; ++v)
            first->push_back(tg.block_words[static_cast<std::size_t>(v)][0]);
        if (tg.nvert == 0) first->push_back(0);
        psi.rule = [first](EvalCtx& ctx, const Elem& at) -> int {
            int v = ctx.get(0, at);
            if (v == kNeed) return kNeed;
            return (*first)[static_cast<std::size_t>(v)];
        };
        auto d = std::make_shared<MapDesc>();
        d->kind = "block_first_letter";
        psi.desc = d;
        r.from_vertex = psi;
    }
    return r;
}

Sft vertex_sft(int nsym, const std::vector<std::vector<char>>& allowed) {
    std::vector<std::vector<int>> forb;
    for (int u = 0; u < nsym; ++u)
        for (int v = 0; v < nsym; ++v)
            if (!allowed[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)])
                forb.push_back({u, v});
    return Sft(Group::line(), Alphabet::indexed(nsym), interval(0, 1), std::move(forb));
}

namespace {

using BoolMat = std::vector<std::vector<char>>;

BoolMat bool_mul(const BoolMat& a, const BoolMat& b) {
    std::size_t n = a.size();
    BoolMat c(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (b[k][j]) c[i][j] = 1;
    return c;
}

bool all_positive(const BoolMat& a) {
    for (const auto& row : a)
        for (char v : row)
            if (!v) return false;
    return true;
}

bool strongly_connected(const BoolMat& a) {
    std::size_t n = a.size();
    if (n == 0) return false;
    auto reach = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                bool e = forward ? a[u][v] : a[v][u];
                if (e && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        return std::count(seen.begin(), seen.end(), 1) == static_cast<long>(n);
    };
    return reach(true) && reach(false);
}

// gcd of cycle lengths of a strongly connected graph
int graph_period(const BoolMat& a) {
    std::size_t n = a.size();
    std::vector<int> level(n, -1);
    std::vector<std::size_t> queue{0};
    level[0] = 0;
    int g = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::size_t u = queue[qi];
        for (std::size_t v = 0; v < n; ++v) {
            if (!a[u][v]) continue;
            if (level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
            }
        }
    }
    return g == 0 ? 1 : g;
}

} // namespace

OneDimReport analyze_1d(const Sft& x, int period_bound) {
    Recode1d r = recode_to_vertex_shift(x);
    const TransitionGraph& tg = r.graph;
    OneDimReport rep;
    rep.profile_bound = period_bound;
    rep.empty = tg.nvert == 0;
    rep.essential_blocks = tg.block_words;
    for (int v = 0; v < tg.nvert; ++v) rep.essential_vertices.push_back(v);
    if (rep.empty) return rep;

    BoolMat a = tg.adj;
    rep.transitive = strongly_connected(a);
    if (rep.transitive) rep.period = graph_period(a);

    // gap: least n with all pairs joined by length-(n+1) paths, capped by the
    // Wielandt primitivity bound (|V|-1)^2 + 1
    int cap = (tg.nvert - 1) * (tg.nvert - 1) + 1;
    BoolMat p = a;
    for (int k = 1; k <= cap; ++k) {
        if (all_positive(p)) {
            rep.mixing = true;
            rep.gap = k - 1;
            break;
        }
        p = bool_mul(p, a);
    }

    // trace-positivity profile
    BoolMat q = a;
    for (int nstep = 1; nstep <= period_bound; ++nstep) {
        bool tr = false;
        for (int i = 0; i < tg.nvert; ++i)
            if (q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]) {
                tr = true;
                break;
            }
        if (tr) rep.period_set.push_back(nstep);
        if (nstep < period_bound) q = bool_mul(q, a);
    }
    return rep;
}

Validity exact_valid_1d(const Sft& x, const Pattern& p) {
    Recode1d r = recode_to_vertex_shift(x);
    const TransitionGraph& tg = r.graph;
    if (tg.nvert == 0) return {Verdict3::Invalid, -1, "empty subshift"};
    if (p.dom.empty()) return {Verdict3::Valid, -1, "empty pattern"};
    int bl = r.block_len;
    int lo = p.dom[0].v[0];
    int hi = p.dom[p.dom.size() - 1].v[0];
    // block at position i covers cells [i, i+bl-1]
    int first = lo - (bl - 1);
    int last = hi;
    auto block_fits = [&](int pos, int vtx) {
        const auto& w = tg.block_words[static_cast<std::size_t>(vtx)];
        for (int j = 0; j < bl; ++j) {
            int cell = pos + j;
            int idx = p.dom.index_of(line_elem(cell));
            if (idx >= 0 && p.sym[static_cast<std::size_t>(idx)] != w[static_cast<std::size_t>(j)])
                return false;
        }
        return true;
    };
    std::vector<char> cur(static_cast<std::size_t>(tg.nvert), 0);
    for (int v = 0; v < tg.nvert; ++v)
        if (block_fits(first, v)) cur[static_cast<std::size_t>(v)] = 1;
    for (int pos = first + 1; pos <= last; ++pos) {
        std::vector<char> nxt(static_cast<std::size_t>(tg.nvert), 0);
        for (int u = 0; u < tg.nvert; ++u) {
            if (!cur[static_cast<std::size_t>(u)]) continue;
            for (int v = 0; v < tg.nvert; ++v)
                if (tg.edge(u, v) && block_fits(pos, v)) nxt[static_cast<std::size_t>(v)] = 1;
        }
        cur = std::move(nxt);
    }
    for (char c : cur)
        if (c) return {Verdict3::Valid, -1, "transition-graph path"};
    return {Verdict3::Invalid, -1, "no transition-graph path"};
}

std::map<std::pair<int, int>, std::vector<int>> transition_words(const Sft& x, int n) {
    if (n < 0) throw input_error("transition word length must be >= 0");
    // globally valid symbols
    std::vector<int> symbols;
    for (int s = 0; s < x.alphabet.size(); ++s) {
        Pattern p(Domain(x.group, {x.group.identity()}), {s});
        if (exact_valid_1d(x, p).v == Verdict3::Valid) symbols.push_back(s);
    }
    std::map<std::pair<int, int>, std::vector<int>> table;
    for (int a : symbols) {
        for (int b : symbols) {
            // lexicographically least v with a v b locally and globally valid
            std::vector<int> v(static_cast<std::size_t>(n), 0);
            bool found = false;
            std::function<bool(int)> rec = [&](int i) -> bool {
                if (i == n) {
                    std::vector<int> word;
                    word.push_back(a);
                    word.insert(word.end(), v.begin(), v.end());
                    word.push_back(b);
                    Pattern p(interval(0, n + 1), word);
                    if (!locally_valid(x, p)) return false;
                    return exact_valid_1d(x, p).v == Verdict3::Valid;
                }
                for (int s = 0; s < x.alphabet.size(); ++s) {
                    v[static_cast<std::size_t>(i)] = s;
                    if (rec(i + 1)) return true;
                }
                return false;
            };
            found = rec(0);
            if (!found)
                throw input_error("no transition word of length " + std::to_string(n) +
                                  " for pair (" + std::to_string(a) + "," + std::to_string(b) +
                                  "); n is below the mixing gap");
            table[{a, b}] = v;
        }
    }
    return table;
}

MixingHomotopy mixing_contraction_homotopy(const Sft& x) {
    MixingHomotopy out;
    out.recode = recode_to_vertex_shift(x);
    OneDimReport rep = analyze_1d(x, 4);
    if (!rep.mixing)
        throw input_error(std::string("SFT is not mixing (") +
                          (rep.empty ? "empty" :
                           rep.transitive ? "primitive period " + std::to_string(rep.period)
                                          : "not transitive") +
                          "); no contraction homotopy exists");
    int n = rep.gap;
    out.gap = n;
    const Sft& v_sft = out.recode.vertex_sft;
    out.vtable = transition_words(v_sft, n);

    Group line = Group::line();
    Alphabet valpha = v_sft.alphabet;
    int nv = valpha.size();

    // seam rule over dilated time: copy x left of the first time flip in
    // [i, i+n], copy y right of it, and spell the transition word across it
    auto vt = std::make_shared<std::vector<std::vector<int>>>(
        static_cast<std::size_t>(nv * nv));
    for (const auto& [key, word] : out.vtable)
        (*vt)[static_cast<std::size_t>(key.first * nv + key.second)] = word;

    BlockMap seam;
    seam.group = line;
    seam.source = Alphabet::product({Alphabet::binary(), valpha, valpha});
    seam.target = valpha;
    seam.nbhd = interval(-n - 1, n + 1);
    int nn = n;
    int nvc = nv;
    seam.rule = [nn, nvc, vt](EvalCtx& ctx, const Elem& at) -> int {
        int i = at.v[0];
        int t0 = ctx.get(0, line_elem(i));
        if (t0 == kNeed) return kNeed;
        for (int k = 1; k <= nn; ++k) {
            int tk = ctx.get(0, line_elem(i + k));
            if (tk == kNeed) return kNeed;
            if (tk != t0) {
                // first flip at offset k: spell v(left, right)_{n-k}
                int a, b;
                if (t0 == 0) {
                    a = ctx.get(1, line_elem(i + k - nn - 1));
                    b = ctx.get(2, line_elem(i + k));
                } else {
                    a = ctx.get(2, line_elem(i + k - nn - 1));
                    b = ctx.get(1, line_elem(i + k));
                }
                if (a == kNeed || b == kNeed) return kNeed;
                const auto& w = (*vt)[static_cast<std::size_t>(a * nvc + b)];
                return w[static_cast<std::size_t>(nn - k)];
            }
        }
        return ctx.get(t0 == 0 ? 1 : 2, line_elem(i));
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "mixing_seam";
    d->params["gap"] = std::to_string(n);
    seam.desc = d;

    Homotopy h;
    h.target = v_sft;
    h.time_symbols = 2;
    if (n == 0) {
        h.map = seam;
        h.time_nbhd = interval(0, 0);
    } else {
        BlockMap dil = dilation(line, n, DilationVariant::ZMinMax);
        BlockMap idv = identity_map(line, valpha);
        h.map = compose(seam, product({dil, idv, idv}));
        h.time_nbhd = interval(-n - 1, 12 * n + 1);
    }
    h.endpoints_all_contents = true; // the seam rule dispatches on time alone
    h.map.nbhd = h.map.nbhd.unioned(Domain(line, {line.identity()}));
    int nx = valpha.num_tracks();
    h.constraints = {{1, v_sft}, {1 + nx, v_sft}};
    h.left_map = projection_map(line, h.map.source, 1, 1 + nx);
    h.right_map = projection_map(line, h.map.source, 1 + nx, 1 + 2 * nx);
    h.two_config_tracks = true;
    out.homotopy = h;
    return out;
}

HEquivVerdict homotopy_equivalent_transitive(const Sft& x, const Sft& y, int bound) {
    OneDimReport rx = analyze_1d(x, 4);
    OneDimReport ry = analyze_1d(y, 4);
    if (!rx.transitive || !ry.transitive)
        throw input_error("homotopy equivalence criterion needs transitive SFTs");
    if (rx.period != ry.period) return HEquivVerdict::NotEquivalent;
    long long nx = static_cast<long long>(rx.essential_vertices.size());
    long long ny = static_cast<long long>(ry.essential_vertices.size());
    long long lcm = std::lcm(static_cast<long long>(rx.period), static_cast<long long>(ry.period));
    long long horizon = std::max({static_cast<long long>(bound), nx * nx, ny * ny}) * lcm;
    OneDimReport px = analyze_1d(x, static_cast<int>(horizon));
    OneDimReport py = analyze_1d(y, static_cast<int>(horizon));
    return px.period_set == py.period_set ? HEquivVerdict::Equivalent
                                          : HEquivVerdict::NotEquivalent;
}

} // namespace symdyn
