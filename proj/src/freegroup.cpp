#include "symdyn/freegroup.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "symdyn/sft.hpp"

namespace symdyn {

Sft to_sft(const NnFreeSft& x) {
    Group g = Group::free_group(x.k);
    Domain window = ball(g, 1);
    Alphabet alpha = Alphabet::indexed(x.nsym);
    std::vector<std::vector<int>> forb;
    std::vector<int> sym(window.size(), 0);
    int id_idx = window.index_of(g.identity());
    std::vector<std::pair<int, int>> letters; // (window index, letter)
    for (std::size_t i = 0; i < window.size(); ++i) {
        if (static_cast<int>(i) == id_idx) continue;
        letters.push_back({static_cast<int>(i), window[i].v[0]});
    }
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == window.size()) {
            int c = sym[static_cast<std::size_t>(id_idx)];
            for (auto [wi, letter] : letters) {
                if (!x.pair_ok(letter, c, sym[static_cast<std::size_t>(wi)])) {
                    forb.push_back(sym);
                    return;
                }
            }
            return;
        }
        for (int s = 0; s < x.nsym; ++s) {
            sym[i] = s;
            rec(i + 1);
        }
    };
    rec(0);
    return Sft(g, alpha, window, std::move(forb));
}

std::vector<int> essential_symbols(const NnFreeSft& x) {
    std::vector<char> alive(static_cast<std::size_t>(x.nsym), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < x.nsym; ++a) {
            if (!alive[static_cast<std::size_t>(a)]) continue;
            bool ok = true;
            for (int letter = -x.k; letter <= x.k && ok; ++letter) {
                if (letter == 0) continue;
                bool has = false;
                for (int b = 0; b < x.nsym && !has; ++b)
                    if (alive[static_cast<std::size_t>(b)] && x.pair_ok(letter, a, b)) has = true;
                ok = has;
            }
            if (!ok) {
                alive[static_cast<std::size_t>(a)] = 0;
                changed = true;
            }
        }
    }
    std::vector<int> out;
    for (int a = 0; a < x.nsym; ++a)
        if (alive[static_cast<std::size_t>(a)]) out.push_back(a);
    return out;
}

namespace {

using SymSet = std::uint32_t; // bitmask over symbols

SymSet transfer(const NnFreeSft& x, int letter, SymSet from, SymSet ess) {
    SymSet out = 0;
    for (int b = 0; b < x.nsym; ++b) {
        if (!((ess >> b) & 1)) continue;
        for (int a = 0; a < x.nsym; ++a) {
            if (!((from >> a) & 1)) continue;
            if (x.pair_ok(letter, a, b)) {
                out |= SymSet{1} << b;
                break;
            }
        }
    }
    return out;
}

} // namespace

bool glue_check(const NnFreeSft& x, const Pattern& p, const Pattern& q) {
    Group g = Group::free_group(x.k);
    if (!p.dom.intersect(q.dom).empty()) throw input_error("glue_check needs disjoint domains");
    std::vector<int> ess_list = essential_symbols(x);
    SymSet ess = 0;
    for (int s : ess_list) ess |= SymSet{1} << s;
    if (ess == 0) return false;

    // prefix tree over all prefixes of both domains
    std::set<std::vector<int>> nodes;
    auto add_prefixes = [&](const Domain& d) {
        for (const Elem& e : d.cells()) {
            std::vector<int> w;
            nodes.insert(w);
            for (int letter : e.v) {
                w.push_back(letter);
                nodes.insert(w);
            }
        }
    };
    add_prefixes(p.dom);
    add_prefixes(q.dom);

    std::map<std::vector<int>, SymSet> dom;
    for (const auto& w : nodes) {
        Elem e{w};
        SymSet s = ess;
        int ip = p.dom.index_of(e);
        int iq = q.dom.index_of(e);
        if (ip >= 0) s &= SymSet{1} << p.sym[static_cast<std::size_t>(ip)];
        if (iq >= 0) s &= SymSet{1} << q.sym[static_cast<std::size_t>(iq)];
        dom[w] = s;
    }

    // leaves-to-root arc consistency; on a tree one upward sweep decides
    std::vector<std::vector<int>> order(nodes.begin(), nodes.end());
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    for (const auto& w : order) {
        if (w.empty()) continue;
        std::vector<int> parent(w.begin(), w.end() - 1);
        int letter = w.back();
        SymSet child = dom[w];
        SymSet mask = 0;
        for (int a = 0; a < x.nsym; ++a) {
            if (!((dom[parent] >> a) & 1)) continue;
            for (int b = 0; b < x.nsym; ++b) {
                if (!((child >> b) & 1)) continue;
                if (x.pair_ok(letter, a, b)) {
                    mask |= SymSet{1} << a;
                    break;
                }
            }
        }
        dom[parent] &= mask;
    }
    return dom[std::vector<int>{}] != 0;
}

SiVerdict is_strongly_irreducible(const NnFreeSft& x, int r0, int rmax) {
    SiVerdict v;
    v.r0 = r0;
    v.rmax = rmax;
    std::vector<int> ess_list = essential_symbols(x);
    if (ess_list.empty()) throw input_error("empty subshift after essentialization");
    SymSet ess = 0;
    for (int s : ess_list) ess |= SymSet{1} << s;

    // endpoint profile: boundary symbol and incoming letter of every locally
    // valid ball pattern over essential symbols
    Group g = Group::free_group(x.k);
    Sft sft = to_sft(x);
    Domain b = ball(g, r0);
    std::set<std::pair<int, int>> endpoints; // (boundary symbol, last letter of the node)
    enumerate_locally_valid(sft, b, [&](const Pattern& pat) {
        for (int s : pat.sym)
            if (!((ess >> s) & 1)) return;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (static_cast<int>(b[i].v.size()) != r0) continue;
            endpoints.insert({pat.sym[i], b[i].v.back()});
        }
    });
    if (endpoints.empty()) throw input_error("no valid pinned balls");

    // reachable propagation states (symbol set, last letter) per distance,
    // evolved until the state family cycles
    using StateSet = std::set<std::pair<SymSet, int>>;
    int max_fail = 0;
    bool unbounded_fail = false;
    for (auto [s1, ul] : endpoints) {
        StateSet cur;
        cur.insert({SymSet{1} << s1, ul});
        std::map<StateSet, int> seen;
        std::vector<StateSet> history{cur};
        seen[cur] = 0;
        int cycle_start = -1, cycle_len = -1;
        for (int d = 1;; ++d) {
            StateSet nxt;
            for (auto [set, last] : cur) {
                for (int letter = -x.k; letter <= x.k; ++letter) {
                    if (letter == 0 || letter == -last) continue;
                    SymSet t = transfer(x, letter, set, ess);
                    nxt.insert({t, letter});
                }
            }
            cur = std::move(nxt);
            auto it = seen.find(cur);
            if (it != seen.end()) {
                cycle_start = it->second;
                cycle_len = d - it->second;
                break;
            }
            seen[cur] = d;
            history.push_back(cur);
        }
        // failure at distance d: some reachable (set, letter) misses some
        // pinned entry symbol s2 whose attachment letter cl != letter
        auto fails_at = [&](const StateSet& states) {
            for (auto [set, letter] : states) {
                for (auto [s2, cl] : endpoints) {
                    // the final path letter must not cancel into the far ball:
                    // the far node's outward letter is cl, the path arrives
                    // along `letter`, and the reduced junction rules out
                    // letter == cl
                    if (letter == cl) continue;
                    if (!((set >> s2) & 1)) return true;
                }
            }
            return false;
        };
        for (int d = 1; d < static_cast<int>(history.size()); ++d)
            if (fails_at(history[static_cast<std::size_t>(d)])) max_fail = std::max(max_fail, d);
        // states inside the cycle recur at arbitrarily large distances
        for (int d = std::max(cycle_start, 1); d < static_cast<int>(history.size()); ++d)
            if (fails_at(history[static_cast<std::size_t>(d)])) unbounded_fail = true;
        if (fails_at(cur)) unbounded_fail = true;
    }
    int gap = max_fail + 1;
    if (unbounded_fail || gap > rmax) {
        v.found = false;
        return v;
    }
    v.found = true;
    v.gap = gap;
    return v;
}

namespace {

// canonical representative permutations, one per cycle type
void cycle_type_reps(int p, std::vector<std::vector<int>>& out) {
    std::vector<int> parts;
    std::function<void(int, int)> rec = [&](int left, int maxpart) {
        if (left == 0) {
            std::vector<int> perm(static_cast<std::size_t>(p));
            int base = 0;
            for (int it = static_cast<int>(parts.size()) - 1; it >= 0; --it) {
                int len = parts[static_cast<std::size_t>(it)];
                for (int j = 0; j < len; ++j)
                    perm[static_cast<std::size_t>(base + j)] = base + (j + 1) % len;
                base += len;
            }
            out.push_back(std::move(perm));
            return;
        }
        for (int part = std::min(left, maxpart); part >= 1; --part) {
            parts.push_back(part);
            rec(left - part, part);
            parts.pop_back();
        }
    };
    rec(p, p);
}

void all_perms(int p, std::vector<std::vector<int>>& out) {
    std::vector<int> perm(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) perm[static_cast<std::size_t>(i)] = i;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

bool label_quotient(const NnFreeSft& x, const std::vector<std::vector<int>>& perms, int degree,
                    std::vector<int>& labels) {
    labels.assign(static_cast<std::size_t>(degree), -1);
    std::function<bool(int)> rec = [&](int v) -> bool {
        if (v == degree) return true;
        for (int s = 0; s < x.nsym; ++s) {
            labels[static_cast<std::size_t>(v)] = s;
            bool ok = true;
            for (int i = 0; i < x.k && ok; ++i) {
                int w = perms[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
                if (labels[static_cast<std::size_t>(w)] >= 0 &&
                    !x.pair_ok(i + 1, s, labels[static_cast<std::size_t>(w)]))
                    ok = false;
                // incoming edges u -> v
                for (int u = 0; u < v && ok; ++u)
                    if (perms[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)] == v &&
                        !x.pair_ok(i + 1, labels[static_cast<std::size_t>(u)], s))
                        ok = false;
            }
            if (ok && rec(v + 1)) return true;
        }
        labels[static_cast<std::size_t>(v)] = -1;
        return false;
    };
    return rec(0);
}

} // namespace

PeriodicSearch find_periodic_point(const NnFreeSft& x, int degree_bound) {
    PeriodicSearch res;
    res.degree_bound = degree_bound;
    for (int p = 1; p <= degree_bound; ++p) {
        std::vector<std::vector<int>> first;
        cycle_type_reps(p, first);
        std::vector<std::vector<int>> rest;
        all_perms(p, rest);
        // choose one permutation per generator; the first generator ranges
        // over cycle-type representatives only (conjugating the whole tuple
        // yields an isomorphic labeled quotient)
        std::vector<std::vector<int>> chosen(static_cast<std::size_t>(x.k));
        std::function<bool(int)> pick = [&](int i) -> bool {
            if (i == x.k) {
                std::vector<int> labels;
                if (label_quotient(x, chosen, p, labels)) {
                    PeriodicConfig cfg =
                        PeriodicConfig::free_quotient(x.k, p, chosen, labels);
                    // full edge verification
                    for (int v = 0; v < p; ++v)
                        for (int g = 0; g < x.k; ++g)
                            if (!x.pair_ok(g + 1, cfg.sym[static_cast<std::size_t>(v)],
                                           cfg.sym[static_cast<std::size_t>(
                                               chosen[static_cast<std::size_t>(g)]
                                                     [static_cast<std::size_t>(v)])]))
                                throw input_error("periodic point failed edge verification");
                    res.found = true;
                    res.config = cfg;
                    return true;
                }
                return false;
            }
            const auto& pool = i == 0 ? first : rest;
            for (const auto& perm : pool) {
                chosen[static_cast<std::size_t>(i)] = perm;
                if (pick(i + 1)) return true;
            }
            return false;
        };
        if (pick(0)) return res;
    }
    return res;
}

NnFreeSft random_sft(int k, int alphabet_size, double density, std::uint64_t seed) {
    if (!(density > 0.0 && density < 1.0)) throw input_error("density must be in (0,1)");
    NnFreeSft x;
    x.k = k;
    x.nsym = alphabet_size;
    x.allowed.assign(static_cast<std::size_t>(k),
                     std::vector<std::vector<char>>(
                         static_cast<std::size_t>(alphabet_size),
                         std::vector<char>(static_cast<std::size_t>(alphabet_size), 0)));
    // threshold on the top 53 bits keeps the draw exact for dyadic densities
    std::uint64_t threshold = static_cast<std::uint64_t>(
        density * 9007199254740992.0); // 2^53
    for (int i = 0; i < k; ++i)
        for (int a = 0; a < alphabet_size; ++a)
            for (int b = 0; b < alphabet_size; ++b) {
                std::uint64_t h = hash_counters(seed, static_cast<std::uint64_t>(i),
                                                static_cast<std::uint64_t>(a),
                                                static_cast<std::uint64_t>(b));
                x.allowed[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]
                         [static_cast<std::size_t>(b)] = (h >> 11) < threshold ? 1 : 0;
            }
    return x;
}

SearchReport search_counterexample(int k, int alphabet_size, double density, std::uint64_t count,
                                   int rmax, int degree_bound, std::uint64_t seed, int jobs) {
    SearchReport rep;
    rep.seed = seed;
    rep.count = count;
    rep.k = k;
    rep.alphabet = alphabet_size;
    rep.density = density;
    rep.rmax = rmax;
    rep.degree_bound = degree_bound;
    rep.records.resize(static_cast<std::size_t>(count));
    auto t0 = std::chrono::steady_clock::now();

    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::uint64_t i = next.fetch_add(1);
            if (i >= count) return;
            SearchRecord& r = rep.records[static_cast<std::size_t>(i)];
            r.index = i;
            NnFreeSft x = random_sft(k, alphabet_size, density, hash_counters(seed, i));
            r.nonempty = !essential_symbols(x).empty();
            if (!r.nonempty) continue;
            SiVerdict si = is_strongly_irreducible(x, 1, rmax);
            r.si = si.found;
            if (!si.found) continue;
            r.gap = si.gap;
            PeriodicSearch ps = find_periodic_point(x, degree_bound);
            r.periodic_found = ps.found;
            if (ps.found) r.degree = ps.config->degree;
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const SearchRecord& r : rep.records)
        if (r.nonempty && r.si && !r.periodic_found) rep.candidates.push_back(r.index);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace symdyn
