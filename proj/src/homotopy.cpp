#include "symdyn/homotopy.hpp"

#include <algorithm>
#include <unordered_map>

namespace symdyn {

namespace {

Alphabet homotopy_alphabet(int time_symbols, const Alphabet& config) {
    return Alphabet::product({Alphabet::indexed(time_symbols), config, config});
}

std::string pattern_brief(const Group& g, const Pattern& p) {
    std::string s;
    for (std::size_t i = 0; i < p.dom.size(); ++i) {
        if (i) s += " ";
        s += g.show(p.dom[i]) + ":" + std::to_string(p.sym[i]);
    }
    return s;
}

// Standard wiring for a two-configuration-track contraction homotopy.
void finish_contraction(Homotopy& h) {
    const Sft& x = h.target;
    int nx = x.alphabet.num_tracks();
    h.constraints = {{h.x_track(), x}, {h.y_track(), x}};
    h.left_map = projection_map(x.group, h.map.source, 1, 1 + nx);
    h.right_map = projection_map(x.group, h.map.source, 1 + nx, 1 + 2 * nx);
    h.two_config_tracks = true;
}

} // namespace

SourceSpec homotopy_source(const Homotopy& h) {
    SourceSpec s;
    s.group = h.map.group;
    s.alphabet = h.map.source;
    s.constraints = h.constraints;
    return s;
}

Homotopy naive_homotopy(const BlockMap& f, const BlockMap& g,
                        std::vector<TrackConstraint> config_constraints, const Sft& target) {
    if (f.source != g.source || f.target != g.target)
        throw input_error("naive homotopy requires maps sharing source and target");
    if (f.target != target.alphabet)
        throw input_error("naive homotopy target alphabet mismatch");
    Homotopy h;
    h.target = target;
    h.time_symbols = 2;
    Group grp = f.group;
    h.time_nbhd = Domain(grp, {grp.identity()});
    h.endpoints_all_contents = true;

    BlockMap m;
    m.group = grp;
    m.source = Alphabet::product({Alphabet::binary(), f.source});
    m.target = f.target;
    m.nbhd = f.nbhd.unioned(g.nbhd).unioned(Domain(grp, {grp.identity()}));

    // endpoint maps lifted over the time track
    auto lift = [&](const BlockMap& e) {
        BlockMap lifted = e;
        lifted.source = m.source;
        BlockMap inner = e;
        lifted.rule = [inner](EvalCtx& ctx, const Elem& at) -> int {
            struct Shift : EvalCtx {
                EvalCtx& base;
                explicit Shift(EvalCtx& b) : base(b) {}
                int get(int track, const Elem& cell) override {
                    int v = base.get(track + 1, cell);
                    if (v == kNeed) note_need(track, cell);
                    return v;
                }
            } s(ctx);
            return inner.eval(s, at);
        };
        return lifted;
    };
    BlockMap lf = lift(f), lg = lift(g);
    BlockMap lfc = lf, lgc = lg;
    m.rule = [lfc, lgc](EvalCtx& ctx, const Elem& at) -> int {
        int t = ctx.get(0, at);
        if (t == kNeed) return kNeed;
        return t == 0 ? lfc.eval(ctx, at) : lgc.eval(ctx, at);
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "naive_homotopy";
    d->children = {f, g};
    m.desc = d;
    h.map = m;
    h.left_map = lf;
    h.right_map = lg;
    for (auto& c : config_constraints) {
        c.track += 1; // account for the time track
        h.constraints.push_back(c);
    }
    return h;
}

Homotopy naive_contraction(const Sft& x) {
    Alphabet prod = Alphabet::product({x.alphabet, x.alphabet});
    int nx = x.alphabet.num_tracks();
    BlockMap p1 = projection_map(x.group, prod, 0, nx);
    BlockMap p2 = projection_map(x.group, prod, nx, 2 * nx);
    Homotopy h = naive_homotopy(p1, p2, {{0, x}, {nx, x}}, x);
    h.two_config_tracks = true;
    return h;
}

Homotopy safe_symbol_homotopy(const Sft& x, int safe) {
    if (safe < 0 || safe >= x.alphabet.size()) throw input_error("safe symbol out of alphabet");
    // single-cell replacement check: for every locally valid pattern on
    // W^-1 W, writing `safe` at the identity must keep every window valid
    Domain wiw = x.window.inverse().product(x.window);
    const Elem id = x.group.identity();
    {
        std::vector<Pattern> bad;
        enumerate_locally_valid(x, wiw, [&](const Pattern& p) {
            if (!bad.empty()) return;
            Pattern q = p;
            q.sym[static_cast<std::size_t>(q.dom.index_of(id))] = safe;
            if (!locally_valid(x, q)) bad.push_back(q);
        });
        if (!bad.empty())
            throw input_error("symbol " + std::to_string(safe) + " is not safe; witness {" +
                              pattern_brief(x.group, bad.front()) + "}");
    }

    Homotopy h;
    h.target = x;
    h.time_symbols = 2;
    Domain m = x.window.inverse().unioned(Domain(x.group, {id}));
    h.time_nbhd = m;
    h.endpoints_all_contents = true;

    BlockMap bm;
    bm.group = x.group;
    bm.source = homotopy_alphabet(2, x.alphabet);
    bm.target = x.alphabet;
    bm.nbhd = m;
    Group g = x.group;
    Domain mdom = m;
    bm.rule = [g, mdom, safe](EvalCtx& ctx, const Elem& at) -> int {
        bool saw0 = false, saw1 = false, missing = false;
        for (const Elem& c : mdom.cells()) {
            int t = ctx.get(0, g.mul(at, c));
            if (t == kNeed)
                missing = true;
            else
                (t == 0 ? saw0 : saw1) = true;
            if (saw0 && saw1) return safe; // mixed, regardless of unread cells
        }
        if (missing) return kNeed;
        return ctx.get(saw1 ? 2 : 1, at);
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "safe_symbol";
    d->params["safe"] = std::to_string(safe);
    bm.desc = d;
    h.map = bm;
    finish_contraction(h);
    return h;
}

std::pair<Sft, Homotopy> burton_steif(const Group& g, int m) {
    if (m < 1) throw input_error("burton_steif needs M >= 1");
    // alphabet indices 0..2M-1 <-> values -M..-1, 1..M
    std::vector<std::string> names;
    for (int v = -m; v <= m; ++v) {
        if (v == 0) continue;
        names.push_back(std::to_string(v));
    }
    Alphabet alpha = Alphabet::single(names);
    auto value_of = [m](int idx) { return idx < m ? idx - m : idx - m + 1; };
    auto sign_symbol = [m](int sign) { return sign < 0 ? m - 1 : m; }; // value -1 / +1

    std::vector<Elem> gens = g.generators();
    Domain window = ball(g, 1);
    std::vector<std::vector<int>> forb;
    {
        // forbid window patterns with an adjacent opposite-sign pair not both +-1
        std::vector<int> sym(window.size(), 0);
        int id_idx = window.index_of(g.identity());
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == window.size()) {
                int c = value_of(sym[static_cast<std::size_t>(id_idx)]);
                for (const Elem& s : gens) {
                    int j = window.index_of(s);
                    int v = value_of(sym[static_cast<std::size_t>(j)]);
                    if (c * v <= -2) {
                        forb.push_back(sym);
                        return;
                    }
                }
                return;
            }
            for (int a = 0; a < alpha.size(); ++a) {
                sym[i] = a;
                rec(i + 1);
            }
        };
        rec(0);
    }
    Sft x(g, alpha, window, std::move(forb), "burton_steif");

    Homotopy h;
    h.target = x;
    h.time_symbols = 2;
    Domain sdom(g, gens);
    h.time_nbhd = sdom.unioned(sdom.product(sdom)); // t is read on S and S*S
    h.endpoints_all_contents = true;

    BlockMap bm;
    bm.group = g;
    bm.source = homotopy_alphabet(2, alpha);
    bm.target = alpha;
    bm.nbhd = ball(g, 2).unioned(Domain(g, {g.identity()}));
    auto gens_copy = gens;
    bm.rule = [g, gens_copy, value_of, sign_symbol](EvalCtx& ctx, const Elem& at) -> int {
        // classify t|aS
        bool saw0 = false, saw1 = false, missing = false;
        for (const Elem& s : gens_copy) {
            int t = ctx.get(0, g.mul(at, s));
            if (t == kNeed)
                missing = true;
            else
                (t == 0 ? saw0 : saw1) = true;
            if (saw0 && saw1) break;
        }
        if (!(saw0 && saw1)) {
            if (missing) return kNeed;
            return ctx.get(saw1 ? 2 : 1, at); // unary cases copy x / y
        }
        // mixed: look for b in S with t|abS unary (the two scans cannot both
        // succeed, since both windows contain t at `at` itself)
        for (int track : {1, 2}) {
            int want = track == 1 ? 0 : 1;
            for (const Elem& b : gens_copy) {
                Elem ab = g.mul(at, b);
                bool all = true, miss2 = false;
                for (const Elem& s : gens_copy) {
                    int t = ctx.get(0, g.mul(ab, s));
                    if (t == kNeed)
                        miss2 = true;
                    else if (t != want) {
                        all = false;
                        break;
                    }
                }
                if (all && miss2) return kNeed;
                if (all) {
                    int v = ctx.get(track, ab);
                    if (v == kNeed) return kNeed;
                    return sign_symbol(value_of(v) < 0 ? -1 : 1);
                }
            }
        }
        return sign_symbol(1); // remaining case writes value 1
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "burton_steif";
    d->params["M"] = std::to_string(m);
    bm.desc = d;
    h.map = bm;
    finish_contraction(h);
    return {x, h};
}

std::pair<Sft, Homotopy> coloring_homotopy(const Group& g, int alphabet_size) {
    auto gens = g.generators();
    if (alphabet_size <= static_cast<int>(gens.size()))
        throw input_error("coloring needs alphabet size > |S| = " + std::to_string(gens.size()));
    int n = alphabet_size;
    if (n >= 63) throw input_error("coloring alphabet too large");
    Alphabet alpha = Alphabet::indexed(n);
    Domain window = ball(g, 1);
    std::vector<std::vector<int>> forb;
    {
        std::vector<int> sym(window.size(), 0);
        int id_idx = window.index_of(g.identity());
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == window.size()) {
                for (const Elem& s : gens) {
                    if (sym[static_cast<std::size_t>(window.index_of(s))] ==
                        sym[static_cast<std::size_t>(id_idx)]) {
                        forb.push_back(sym);
                        return;
                    }
                }
                return;
            }
            for (int a = 0; a < n; ++a) {
                sym[i] = a;
                rec(i + 1);
            }
        };
        rec(0);
    }
    Sft x(g, alpha, window, std::move(forb), "coloring");

    Homotopy h;
    h.target = x;
    h.time_symbols = 2;
    h.time_nbhd = ball(g, n + 1);
    h.endpoints_all_contents = true;

    BlockMap bm;
    bm.group = g;
    bm.source = homotopy_alphabet(2, alpha);
    bm.target = alpha;
    bm.nbhd = ball(g, n + 1);
    const int kBlank = n; // internal stage value for unfilled cells
    auto gens_copy = gens;
    bm.rule = [g, gens_copy, n, kBlank](EvalCtx& ctx, const Elem& at) -> int {
        // staged filling with per-evaluation memo; stage(i, c) returns the
        // cell value after stage i, kBlank if still unfilled, kNeed if blocked
        std::unordered_map<Elem, std::vector<int>, ElemHash> memo;
        std::function<int(int, const Elem&)> stage = [&](int i, const Elem& c) -> int {
            auto& slot = memo[c];
            if (slot.empty()) slot.assign(static_cast<std::size_t>(n + 1), -2);
            if (slot[static_cast<std::size_t>(i)] != -2) return slot[static_cast<std::size_t>(i)];
            int result;
            if (i == 0) {
                int t = ctx.get(0, c);
                if (t == kNeed) return kNeed; // blocks are not memoized
                if (t == 0) {
                    result = ctx.get(1, c);
                    if (result == kNeed) return kNeed;
                } else {
                    bool all1 = true, missing = false;
                    for (const Elem& s : gens_copy) {
                        int u = ctx.get(0, g.mul(c, s));
                        if (u == kNeed)
                            missing = true;
                        else if (u == 0) {
                            all1 = false;
                            break;
                        }
                    }
                    if (all1 && missing) return kNeed;
                    if (all1) {
                        result = ctx.get(2, c);
                        if (result == kNeed) return kNeed;
                    } else {
                        result = kBlank;
                    }
                }
            } else {
                int prev = stage(i - 1, c);
                if (prev == kNeed) return kNeed;
                if (prev != kBlank) {
                    result = prev;
                } else {
                    int xc = ctx.get(1, c);
                    if (xc == kNeed) return kNeed;
                    if (xc == i - 1) {
                        // least color absent from the stage-(i-1) neighborhood
                        bool used[64] = {};
                        for (const Elem& s : gens_copy) {
                            int u = stage(i - 1, g.mul(c, s));
                            if (u == kNeed) return kNeed;
                            if (u != kBlank) used[u] = true;
                        }
                        result = 0;
                        while (used[result]) ++result;
                    } else {
                        result = kBlank;
                    }
                }
            }
            slot[static_cast<std::size_t>(i)] = result;
            return result;
        };
        int v = stage(n, at);
        if (v == kNeed) return kNeed;
        // every cell is filled by its own stage, so v < n here
        return v;
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "coloring";
    d->params["colors"] = std::to_string(n);
    bm.desc = d;
    h.map = bm;
    finish_contraction(h);
    return {x, h};
}

Homotopy z0_homotopy(const Sft& x, int zero) {
    if (zero < 0 || zero >= x.alphabet.size()) throw input_error("zero symbol out of alphabet");
    if (!x.window.connected()) throw input_error("window is not S-connected");
    for (const auto& f : x.forbidden)
        for (int s : f)
            if (s == zero)
                throw input_error("forbidden pattern contains the zero symbol " +
                                  std::to_string(zero));

    Homotopy h;
    h.target = x;
    h.time_symbols = 2;
    Group g = x.group;
    Domain sdom(g, g.generators());
    h.time_nbhd = sdom;
    h.endpoints_all_contents = true;

    BlockMap bm;
    bm.group = g;
    bm.source = homotopy_alphabet(2, x.alphabet);
    bm.target = x.alphabet;
    bm.nbhd = sdom.unioned(Domain(g, {g.identity()}));
    bm.rule = [g, sdom, zero](EvalCtx& ctx, const Elem& at) -> int {
        bool saw0 = false, saw1 = false, missing = false;
        for (const Elem& s : sdom.cells()) {
            int t = ctx.get(0, g.mul(at, s));
            if (t == kNeed)
                missing = true;
            else
                (t == 0 ? saw0 : saw1) = true;
            if (saw0 && saw1) return zero;
        }
        if (missing) return kNeed;
        return ctx.get(saw1 ? 2 : 1, at);
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "z0";
    d->params["zero"] = std::to_string(zero);
    bm.desc = d;
    h.map = bm;
    finish_contraction(h);
    return h;
}

BlockMap natural_extension(const Homotopy& h) {
    if (!h.two_config_tracks)
        throw input_error("natural extension needs a two-configuration-track homotopy");
    const Sft& x = h.target;
    Group g = x.group;
    BlockMap bm;
    bm.group = g;
    bm.source = h.map.source;
    bm.target = h.map.target;
    bm.nbhd = h.map.nbhd;
    Domain tdom = h.time_nbhd;
    BlockMap inner = h.map;
    Sft space = x;
    int k = h.time_symbols;
    int nx = x.alphabet.num_tracks();
    Domain nbhd = bm.nbhd;
    bm.rule = [g, tdom, inner, space, k, nx, nbhd](EvalCtx& ctx, const Elem& at) -> int {
        // unary time windows copy a configuration track verbatim
        bool all0 = true, allk = true, missing = false;
        for (const Elem& c : tdom.cells()) {
            int t = ctx.get(0, g.mul(at, c));
            if (t == kNeed) {
                missing = true;
                continue;
            }
            if (t != 0) all0 = false;
            if (t != k - 1) allk = false;
            if (!all0 && !allk) break;
        }
        if ((all0 || allk) && missing) return kNeed;
        auto copy_track = [&](int base) -> int {
            std::vector<int> parts(nx);
            for (int t = 0; t < nx; ++t) {
                int v = ctx.get(base + t, at);
                if (v == kNeed) return kNeed;
                parts[static_cast<std::size_t>(t)] = v;
            }
            return space.alphabet.flatten(parts);
        };
        if (all0) return copy_track(1);
        if (allk) return copy_track(1 + nx);
        // mixed time window: use the rule when both configuration windows are
        // locally valid, else complete with the first alphabet symbol
        std::vector<Elem> cells;
        cells.reserve(nbhd.size());
        for (const Elem& c : nbhd.cells()) cells.push_back(g.mul(at, c));
        Domain abs_dom(g, cells);
        for (int base : {1, 1 + nx}) {
            std::vector<int> sym;
            sym.reserve(abs_dom.size());
            for (const Elem& c : abs_dom.cells()) {
                std::vector<int> parts(nx);
                for (int t = 0; t < nx; ++t) {
                    int v = ctx.get(base + t, c);
                    if (v == kNeed) return kNeed;
                    parts[static_cast<std::size_t>(t)] = v;
                }
                sym.push_back(space.alphabet.flatten(parts));
            }
            if (!locally_valid(space, Pattern(abs_dom, sym))) return 0;
        }
        return inner.eval(ctx, at);
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "natural_extension";
    d->children = {h.map};
    bm.desc = d;
    return bm;
}

BlockMap dilation(const Group& g, int n, DilationVariant variant) {
    if (n < 0) throw input_error("dilation needs n >= 0");
    switch (variant) {
        case DilationVariant::BallMin:
            return min_map(g, ball(g, n));
        case DilationVariant::ZMinMax: {
            if (g.kind() != GroupKind::Line)
                throw input_error("z_min_max dilation is line-only");
            BlockMap mn = min_map(g, interval(0, 10 * n));
            BlockMap mx = max_map(g, interval(0, n));
            return compose(mx, mn);
        }
    }
    throw input_error("unreachable");
}

namespace {

Homotopy retimed(const Homotopy& h, const BlockMap& time_map, int new_k) {
    Group g = h.map.group;
    BlockMap idc = identity_map(g, h.target.alphabet);
    Homotopy out = h;
    out.map = compose(h.map, product({time_map, idc, idc}));
    out.time_symbols = new_k;
    // endpoint maps must read the restructured source
    int nx = h.target.alphabet.num_tracks();
    out.left_map = projection_map(g, out.map.source, 1, 1 + nx);
    out.right_map = projection_map(g, out.map.source, 1 + nx, 1 + 2 * nx);
    out.constraints = {{out.x_track(), h.target}, {out.y_track(), h.target}};
    return out;
}

} // namespace

Homotopy ksymbol_reduce(const Homotopy& h) {
    if (!h.two_config_tracks) throw input_error("reduce expects a contraction homotopy");
    if (h.time_symbols == 2) return h;
    int m = h.time_symbols;
    Group g = h.map.group;
    BlockMap pi = relabel_map(g, Alphabet::binary(), Alphabet::indexed(m), {0, m - 1});
    return retimed(h, pi, 2);
}

Homotopy ksymbol_lift(const Homotopy& h, int m) {
    if (m < 2) throw input_error("lift needs m >= 2");
    if (h.time_symbols != 2) throw input_error("lift expects a binary time track");
    Group g = h.map.group;
    std::vector<int> image(static_cast<std::size_t>(m), 0);
    image[static_cast<std::size_t>(m - 1)] = 1;
    BlockMap pi = relabel_map(g, Alphabet::indexed(m), Alphabet::binary(), std::move(image));
    return retimed(h, pi, m);
}

ContractionReport verify_contraction(const Homotopy& h, int margin, bool diagonal,
                                     const EngineOptions& opt) {
    ContractionReport rep;
    SourceSpec src = homotopy_source(h);

    // (i) endpoint identities as literal rule equalities
    auto endpoint = [&](int value, const BlockMap& expect) {
        SourceSpec s = src;
        s.pinned_tracks.push_back({0, value});
        return check_maps_agree(h.map, expect, s, !h.endpoints_all_contents, opt);
    };
    rep.endpoint_left = endpoint(0, h.left_map);
    rep.endpoint_right = endpoint(h.time_symbols - 1, h.right_map);

    // (ii) the map sends I_k x X x X into the target
    rep.into = check_into(h.map, src, h.target, margin, opt);

    // (iii) diagonal identity over locally valid contents
    if (diagonal) {
        if (!h.two_config_tracks) throw input_error("diagonal check needs two config tracks");
        SourceSpec s = src;
        for (int t = 0; t < h.target.alphabet.num_tracks(); ++t)
            s.tied_tracks.push_back({h.x_track() + t, h.y_track() + t});
        rep.diagonal = check_maps_agree(h.map, h.left_map, s, true, opt);
        rep.diagonal_checked = true;
    }

    rep.status = CheckStatus::Proved;
    auto worst = [&](const CheckResult& r, const char* stage) {
        if (r.status == CheckStatus::Counterexample && rep.status != CheckStatus::Counterexample) {
            rep.status = CheckStatus::Counterexample;
            rep.failed_stage = stage;
        } else if (r.status == CheckStatus::Unknown && rep.status == CheckStatus::Proved) {
            rep.status = CheckStatus::Unknown;
            rep.failed_stage = stage;
        }
    };
    worst(rep.endpoint_left, "endpoint_left");
    worst(rep.endpoint_right, "endpoint_right");
    worst(rep.into, "into");
    if (rep.diagonal_checked) worst(rep.diagonal, "diagonal");
    return rep;
}

ContractionReport verify_contraction(const Homotopy& h, const EngineOptions& opt) {
    return verify_contraction(h, default_margin(h.target), false, opt);
}

} // namespace symdyn
