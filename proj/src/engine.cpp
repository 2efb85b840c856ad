#include "symdyn/engine.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_map>

namespace symdyn {

int default_margin(const Sft& y) {
    int d = 0;
    for (const Elem& a : y.window.cells())
        for (const Elem& b : y.window.cells()) d = std::max(d, y.group.dist(a, b));
    return d;
}

namespace {

// One validity constraint instantiated on the enumeration domain: the window
// translates fully inside it, as per-track cell indices.
struct InstConstraint {
    const Sft* sft;
    int track_begin;
    int ntracks;
    std::vector<std::vector<int>> translates; // cell indices per translate
};

struct Universe {
    Group group;
    Alphabet alphabet;
    Domain cells;
    std::vector<InstConstraint> constraints;
    std::vector<std::vector<std::pair<int, int>>> touching; // cell -> (constraint, translate)
    std::vector<int> track_alias; // tied tracks: alias[t] = representative track
    std::vector<int> pinned;      // per track: pinned symbol or -1

    Universe(const SourceSpec& x, const Domain& dom) : group(x.group), alphabet(x.alphabet), cells(dom) {
        track_alias.resize(alphabet.num_tracks());
        for (int t = 0; t < alphabet.num_tracks(); ++t) track_alias[t] = t;
        for (auto [a, b] : x.tied_tracks) {
            if (alphabet.track_size(a) != alphabet.track_size(b))
                throw input_error("tied tracks must share a track alphabet");
            track_alias[std::max(a, b)] = std::min(a, b);
        }
        pinned.assign(alphabet.num_tracks(), -1);
        for (auto [t, v] : x.pinned_tracks) pinned[t] = v;

        touching.resize(cells.size());
        for (const auto& c : x.constraints) {
            InstConstraint ic;
            ic.sft = &c.sft;
            ic.track_begin = c.track;
            ic.ntracks = c.sft.alphabet.num_tracks();
            if (c.sft.forbidden.empty()) {
                constraints.push_back(std::move(ic));
                continue;
            }
            Domain positions = cells.product(c.sft.window.inverse());
            for (const Elem& a : positions.cells()) {
                std::vector<int> idx;
                bool inside = true;
                for (const Elem& w : c.sft.window.cells()) {
                    int j = cells.index_of(group.mul(a, w));
                    if (j < 0) {
                        inside = false;
                        break;
                    }
                    idx.push_back(j);
                }
                if (inside) ic.translates.push_back(std::move(idx));
            }
            int ci = static_cast<int>(constraints.size());
            for (std::size_t t = 0; t < ic.translates.size(); ++t)
                for (int j : ic.translates[t])
                    touching[static_cast<std::size_t>(j)].push_back({ci, static_cast<int>(t)});
            constraints.push_back(std::move(ic));
        }
    }
};

// Assignment state: one symbol slot per (track, cell); tied tracks share the
// representative's storage, pinned tracks are prefilled.
struct State {
    const Universe* u;
    std::vector<std::vector<int>> val; // [track][cell]

    explicit State(const Universe& uni) : u(&uni) {
        val.assign(static_cast<std::size_t>(uni.alphabet.num_tracks()),
                   std::vector<int>(uni.cells.size(), -1));
        for (int t = 0; t < uni.alphabet.num_tracks(); ++t)
            if (uni.pinned[t] >= 0)
                std::fill(val[static_cast<std::size_t>(t)].begin(),
                          val[static_cast<std::size_t>(t)].end(), uni.pinned[t]);
    }

    int rep(int track) const { return u->track_alias[static_cast<std::size_t>(track)]; }
    int get(int track, int cell) const {
        return val[static_cast<std::size_t>(rep(track))][static_cast<std::size_t>(cell)];
    }
    void set(int track, int cell, int v) {
        val[static_cast<std::size_t>(rep(track))][static_cast<std::size_t>(cell)] = v;
    }

    // Check every fully assigned window translate that touches this cell.
    bool valid_after(int cell) const {
        for (auto [ci, ti] : u->touching[static_cast<std::size_t>(cell)]) {
            const InstConstraint& ic = u->constraints[static_cast<std::size_t>(ci)];
            const auto& idx = ic.translates[static_cast<std::size_t>(ti)];
            std::vector<int> wpat(idx.size());
            bool complete = true;
            for (std::size_t k = 0; k < idx.size() && complete; ++k) {
                std::vector<int> parts(ic.ntracks);
                for (int t = 0; t < ic.ntracks && complete; ++t) {
                    int v = get(ic.track_begin + t, idx[k]);
                    if (v < 0)
                        complete = false;
                    else
                        parts[static_cast<std::size_t>(t)] = v;
                }
                if (complete) wpat[k] = ic.sft->alphabet.flatten(parts);
            }
            if (complete && ic.sft->is_forbidden(wpat)) return false;
        }
        return true;
    }

    Pattern to_pattern() const {
        std::vector<int> sym(u->cells.size());
        int nt = u->alphabet.num_tracks();
        for (std::size_t i = 0; i < u->cells.size(); ++i) {
            std::vector<int> parts(nt);
            for (int t = 0; t < nt; ++t) parts[static_cast<std::size_t>(t)] = get(t, static_cast<int>(i));
            sym[i] = u->alphabet.flatten(parts);
        }
        return Pattern(u->cells, sym);
    }
};

class StateCtx : public EvalCtx {
  public:
    StateCtx(const State& st) : st_(st) {}
    int get(int track, const Elem& cell) override {
        int i = st_.u->cells.index_of(cell);
        if (i < 0) {
            // outside the universe: treat as undetermined, engine will fail loudly
            note_need(track, cell);
            return kNeed;
        }
        int v = st_.get(track, i);
        if (v < 0) {
            note_need(track, cell);
            return kNeed;
        }
        return v;
    }

  private:
    const State& st_;
};

// Goal interface: step() inspects the state and returns
//   Safe     no completion of this branch can be a counterexample
//   Hit      the already-assigned cells force a counterexample
//   Need     branch on (track, cell) fetched from need_track/need_cell
enum class StepKind { Safe, Hit, Need };
struct StepResult {
    StepKind kind;
    int track = 0;
    Elem cell;
};

struct Goal {
    virtual ~Goal() = default;
    virtual StepResult step(const State& st) = 0;
    virtual Pattern output_witness(const State& st) = 0;
};

// Goal for check_into: the centered output window becomes a forbidden pattern.
// Output cells are evaluated in canonical order; as soon as the determined
// prefix matches no forbidden pattern the branch is safe. Forbidden patterns
// are sorted, so prefix compatibility is two binary searches.
struct ForbiddenOutputGoal : Goal {
    const BlockMap& f;
    const Sft& y;

    ForbiddenOutputGoal(const BlockMap& f, const Sft& y) : f(f), y(y) {}

    StepResult step(const State& st) override {
        StateCtx ctx(st);
        std::vector<int> prefix;
        prefix.reserve(y.window.size());
        for (std::size_t i = 0; i < y.window.size(); ++i) {
            ctx.clear_need();
            int v = f.eval(ctx, y.window[i]);
            if (v == kNeed) {
                if (!prefix_compatible(prefix)) return {StepKind::Safe};
                if (!ctx.has_need()) throw input_error("rule returned kNeed without a request");
                return {StepKind::Need, ctx.need_track(), ctx.need_cell()};
            }
            prefix.push_back(v);
            if (!prefix_compatible(prefix)) return {StepKind::Safe};
        }
        // fully determined: forbidden iff an exact match exists
        return y.is_forbidden(prefix) ? StepResult{StepKind::Hit} : StepResult{StepKind::Safe};
    }

    Pattern output_witness(const State& st) override {
        StateCtx ctx(st);
        std::vector<int> out(y.window.size());
        for (std::size_t i = 0; i < y.window.size(); ++i)
            out[i] = f.eval(ctx, y.window[i]);
        return Pattern(y.window, out);
    }

    bool prefix_compatible(const std::vector<int>& prefix) const {
        if (prefix.empty()) return !y.forbidden.empty();
        auto lo = std::lower_bound(y.forbidden.begin(), y.forbidden.end(), prefix,
                                   [](const std::vector<int>& a, const std::vector<int>& b) {
                                       return std::lexicographical_compare(
                                           a.begin(), a.begin() + std::min(a.size(), b.size()),
                                           b.begin(), b.end());
                                   });
        if (lo == y.forbidden.end()) return false;
        return std::equal(prefix.begin(), prefix.end(), lo->begin());
    }
};

// Two maps must agree at the identity; a disagreement is the hit.
struct MapsDifferGoal : Goal {
    const BlockMap& f;
    const BlockMap& g;
    Elem id;

    MapsDifferGoal(const BlockMap& f, const BlockMap& g) : f(f), g(g), id(f.group.identity()) {}

    StepResult step(const State& st) override {
        StateCtx ctx(st);
        int v = f.eval(ctx, id);
        if (v == kNeed) return {StepKind::Need, ctx.need_track(), ctx.need_cell()};
        ctx.clear_need();
        int w = g.eval(ctx, id);
        if (w == kNeed) return {StepKind::Need, ctx.need_track(), ctx.need_cell()};
        return v != w ? StepResult{StepKind::Hit} : StepResult{StepKind::Safe};
    }

    Pattern output_witness(const State& st) override {
        StateCtx ctx(st);
        Domain d(f.group, {id});
        return Pattern(d, {f.eval(ctx, id)});
    }
};

// Output at identity equals a fixed symbol.
struct HitsSymbolGoal : Goal {
    const BlockMap& f;
    int symbol;
    Elem id;

    HitsSymbolGoal(const BlockMap& f, int symbol) : f(f), symbol(symbol), id(f.group.identity()) {}

    StepResult step(const State& st) override {
        StateCtx ctx(st);
        int v = f.eval(ctx, id);
        if (v == kNeed) return {StepKind::Need, ctx.need_track(), ctx.need_cell()};
        return v == symbol ? StepResult{StepKind::Hit} : StepResult{StepKind::Safe};
    }

    Pattern output_witness(const State& st) override {
        StateCtx ctx(st);
        Domain d(f.group, {id});
        return Pattern(d, {f.eval(ctx, id)});
    }
};

// Budgets are per search slice and counted locally, so a verdict is a pure
// function of the slice and the budget, independent of scheduling.
struct SearchCtl {
    std::uint64_t budget;
    std::uint64_t nodes = 0;

    void tick() {
        if (++nodes > budget) throw budget_error("search exceeded node budget", budget);
    }
};

// Complete all unassigned cells (canonical cell-major, track-minor order) to a
// locally valid total pattern; used to certify a found counterexample.
bool complete_all(State& st, SearchCtl& ctl) {
    int nt = st.u->alphabet.num_tracks();
    for (std::size_t i = 0; i < st.u->cells.size(); ++i) {
        for (int t = 0; t < nt; ++t) {
            if (st.rep(t) != t) continue;
            if (st.get(t, static_cast<int>(i)) >= 0) continue;
            bool placed = false;
            for (int v = 0; v < st.u->alphabet.track_size(t) && !placed; ++v) {
                ctl.tick();
                st.set(t, static_cast<int>(i), v);
                if (st.valid_after(static_cast<int>(i))) {
                    // recurse over the remaining cells
                    if (complete_all(st, ctl)) return true;
                }
                st.set(t, static_cast<int>(i), -1);
            }
            return false; // no symbol fits this cell
        }
    }
    return true;
}

struct SearchOutcome {
    bool hit = false;
    std::optional<Pattern> input;
    std::optional<Pattern> output;
};

// Need-driven DFS. Branch cells are exactly those the goal's rule evaluation
// requests, so free tracks never blow up the enumeration beyond what the rule
// can actually distinguish.
bool search(State& st, Goal& goal, SearchCtl& ctl, SearchOutcome& out) {
    StepResult r = goal.step(st);
    switch (r.kind) {
        case StepKind::Safe:
            return false;
        case StepKind::Hit: {
            State copy = st;
            if (complete_all(copy, ctl)) {
                out.hit = true;
                out.output = goal.output_witness(copy);
                out.input = copy.to_pattern();
                return true;
            }
            return false; // assigned cells admit no valid completion
        }
        case StepKind::Need: {
            int cell = st.u->cells.index_of(r.cell);
            if (cell < 0)
                throw input_error("rule requested a cell outside the enumeration domain: " +
                                  st.u->group.show(r.cell));
            int t = st.rep(r.track);
            for (int v = 0; v < st.u->alphabet.track_size(t); ++v) {
                ctl.tick();
                st.set(t, cell, v);
                if (st.valid_after(cell) && search(st, goal, ctl, out)) return true;
                st.set(t, cell, -1);
            }
            st.set(t, cell, -1);
            return false;
        }
    }
    return false;
}

// Expand the search frontier to at least `want` leaves for parallel execution.
std::vector<State> frontier(const State& root, Goal& goal, std::size_t want) {
    std::vector<State> cur{root};
    // bounded expansion: split the first Need cell repeatedly
    for (int depth = 0; depth < 12 && cur.size() < want; ++depth) {
        std::vector<State> next;
        bool split_any = false;
        for (State& st : cur) {
            StepResult r = goal.step(st);
            if (r.kind == StepKind::Need && next.size() + cur.size() < want * 4) {
                int cell = st.u->cells.index_of(r.cell);
                int t = st.rep(r.track);
                for (int v = 0; v < st.u->alphabet.track_size(t); ++v) {
                    State child = st;
                    child.set(t, cell, v);
                    if (child.valid_after(cell)) next.push_back(std::move(child));
                }
                split_any = true;
            } else {
                next.push_back(st);
            }
        }
        cur = std::move(next);
        if (!split_any) break;
    }
    return cur;
}

CheckResult run_goal(const SourceSpec& x, const Domain& dom, Goal& goal, const EngineOptions& opt,
                     const Sft* confirm_against, const Domain* confirm_core, int margin) {
    Universe uni(x, dom);
    State root(uni);
    std::atomic<std::uint64_t> nodes{0};

    CheckResult res;
    res.margin = margin;

    auto finish_hit = [&](SearchOutcome& oc) {
        Witness w;
        w.input = *oc.input;
        w.output = *oc.output;
        if (opt.confirm_witness && confirm_against && confirm_core) {
            // confirm per constrained track range on the core domain
            Validity agg{Verdict3::Valid, margin, "all constrained tracks globally valid"};
            for (const auto& c : x.constraints) {
                if (c.sft.forbidden.empty()) continue;
                std::vector<int> sym;
                sym.reserve(confirm_core->size());
                for (const Elem& e : confirm_core->cells()) {
                    int i = w.input.dom.index_of(e);
                    std::vector<int> parts(c.sft.alphabet.num_tracks());
                    for (int t = 0; t < c.sft.alphabet.num_tracks(); ++t)
                        parts[static_cast<std::size_t>(t)] =
                            x.alphabet.track_of(w.input.sym[static_cast<std::size_t>(i)], c.track + t);
                    sym.push_back(c.sft.alphabet.flatten(parts));
                }
                Validity val = globally_valid_auto(c.sft, Pattern(*confirm_core, sym),
                                                   std::max(margin, 2));
                if (val.v != Verdict3::Valid) {
                    agg = val;
                    break;
                }
            }
            w.confirmation = agg;
        } else {
            w.confirmation = {Verdict3::Unknown, margin, "confirmation skipped"};
        }
        res.status = CheckStatus::Counterexample;
        res.witness = std::move(w);
    };

    try {
        if (opt.jobs <= 1) {
            SearchCtl ctl{opt.budget};
            SearchOutcome oc;
            if (search(root, goal, ctl, oc))
                finish_hit(oc);
            else
                res.status = CheckStatus::Proved;
            nodes.fetch_add(ctl.nodes);
        } else {
            std::vector<State> tasks = frontier(root, goal, static_cast<std::size_t>(opt.jobs) * 8);
            std::vector<int> outcome(tasks.size(), -1); // 0 safe, 1 hit, 2 unknown
            std::vector<SearchOutcome> hits(tasks.size());
            std::atomic<std::size_t> next{0};
            auto worker = [&]() {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    SearchCtl ctl{opt.budget};
                    try {
                        SearchOutcome oc;
                        if (search(tasks[i], goal, ctl, oc)) {
                            hits[i] = std::move(oc);
                            outcome[i] = 1;
                        } else {
                            outcome[i] = 0;
                        }
                    } catch (const budget_error&) {
                        outcome[i] = 2;
                    }
                    nodes.fetch_add(ctl.nodes);
                }
            };
            std::vector<std::thread> pool;
            for (int j = 0; j < opt.jobs; ++j) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
            // aggregate in canonical slice order: Proved < Unknown < Counterexample,
            // with the first hit in slice order winning
            res.status = CheckStatus::Proved;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (outcome[i] == 2) {
                    res.status = CheckStatus::Unknown;
                    res.note = "budget exhausted in a search slice";
                    break;
                }
                if (outcome[i] == 1) {
                    finish_hit(hits[i]);
                    break;
                }
            }
        }
    } catch (const budget_error& e) {
        res.status = CheckStatus::Unknown;
        res.note = e.what();
    }
    res.nodes = nodes.load();
    return res;
}

} // namespace

CheckResult check_into(const BlockMap& f, const SourceSpec& x, const Sft& y, int margin,
                       const EngineOptions& opt) {
    if (f.source != x.alphabet) throw input_error("check_into: source alphabet mismatch");
    if (f.target != y.alphabet) throw input_error("check_into: target alphabet mismatch");
    if (x.group != y.group || f.group != y.group) throw input_error("check_into: group mismatch");
    Domain core = y.window.product(f.nbhd);
    Domain dom = core.product(ball(y.group, margin));
    ForbiddenOutputGoal goal(f, y);
    CheckResult res = run_goal(x, dom, goal, opt, &y, &core, margin);
    if (res.status == CheckStatus::Proved && y.forbidden.empty())
        res.note = "target is a full shift";
    return res;
}

CheckResult check_into(const BlockMap& f, const Sft& x, const Sft& y, int margin,
                       const EngineOptions& opt) {
    return check_into(f, SourceSpec::from_sft(x), y, margin, opt);
}

CheckResult check_maps_agree(const BlockMap& f, const BlockMap& g, const SourceSpec& x,
                             bool valid_only, const EngineOptions& opt) {
    SourceSpec spec = x;
    if (!valid_only) spec.constraints.clear();
    Domain dom = f.nbhd.unioned(g.nbhd);
    if (!dom.contains(f.group.identity()))
        dom = dom.unioned(Domain(f.group, {f.group.identity()}));
    MapsDifferGoal goal(f, g);
    return run_goal(spec, dom, goal, opt, nullptr, nullptr, 0);
}

CheckResult check_equals_track(const BlockMap& f, const SourceSpec& x, int track, bool valid_only,
                               const EngineOptions& opt) {
    BlockMap proj = projection_map(f.group, x.alphabet, track, track + f.target.num_tracks());
    return check_maps_agree(f, proj, x, valid_only, opt);
}

CheckResult check_hits_symbol(const BlockMap& f, const SourceSpec& x, int symbol,
                              const Domain& extra_margin, const EngineOptions& opt) {
    Domain dom = f.nbhd.product(extra_margin);
    if (!dom.contains(f.group.identity()))
        dom = dom.unioned(Domain(f.group, {f.group.identity()}));
    HitsSymbolGoal goal(f, symbol);
    return run_goal(x, dom, goal, opt, nullptr, nullptr, 0);
}

} // namespace symdyn
