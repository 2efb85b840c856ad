#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <queue>

#include "symdyn/homotopy.hpp"
#include "symdyn/sft.hpp"

using namespace symdyn;

namespace {

// independent distance oracle: breadth-first search in the Cayley graph
int bfs_distance(const Group& g, const Elem& a, const Elem& b, int cap) {
    if (a == b) return 0;
    std::map<std::vector<int>, int> dist;
    std::queue<Elem> q;
    dist[a.v] = 0;
    q.push(a);
    while (!q.empty()) {
        Elem u = q.front();
        q.pop();
        int du = dist[u.v];
        if (du >= cap) continue;
        for (const Elem& s : g.generators()) {
            Elem v = g.mul(u, s);
            if (dist.count(v.v)) continue;
            if (v == b) return du + 1;
            dist[v.v] = du + 1;
            q.push(v);
        }
    }
    return -1;
}

std::uint64_t fib(int n) {
    std::uint64_t a = 0, b = 1;
    for (int i = 0; i < n; ++i) {
        std::uint64_t c = a + b;
        a = b;
        b = c;
    }
    return a;
}

} // namespace

TEST_CASE("balls") {
    CHECK(ball(Group::line(), 2).size() == 5);
    auto b = ball(Group::line(), 2);
    CHECK(b[0] == line_elem(-2));
    CHECK(b[4] == line_elem(2));

    Domain g1 = ball(Group::grid(2), 1);
    CHECK(g1.size() == 5);
    CHECK(g1.contains(grid_elem({0, 0})));
    CHECK(g1.contains(grid_elem({-1, 0})));
    CHECK(!g1.contains(grid_elem({1, 1})));

    // reduced words of length <= 2 over two free generators: 1 + 4 + 12
    CHECK(ball(Group::free_group(2), 2).size() == 17);
}

TEST_CASE("free group arithmetic") {
    Group f = Group::free_group(2);
    Elem ab = f.parse("ab");
    Elem ba_inv = f.inv(f.parse("ab"));
    CHECK(f.show(ba_inv) == "BA");
    CHECK(f.is_identity(f.mul(ab, ba_inv)));
    CHECK(f.norm(f.mul(f.parse("abA"), f.parse("a"))) == 2); // abA * a = ab
    CHECK_THROWS_AS(f.parse("aA"), parse_error);
}

TEST_CASE("metric vs breadth-first search") {
    for (Group g : {Group::line(), Group::grid(2), Group::free_group(2)}) {
        Domain b = ball(g, 2);
        for (std::size_t i = 0; i < b.size(); i += 3)
            for (std::size_t j = 0; j < b.size(); j += 3) {
                int d = g.dist(b[i], b[j]);
                CHECK(d == g.dist(b[j], b[i]));
                CHECK(d == bfs_distance(g, b[i], b[j], 8));
            }
    }
}

TEST_CASE("translation identity") {
    Group g = Group::grid(2);
    Domain d(g, {grid_elem({0, 0}), grid_elem({1, 0}), grid_elem({0, 1})});
    Pattern p(d, {0, 1, 2});
    Elem a = grid_elem({3, -2});
    Pattern q = p.translated(a).translated(g.inv(a));
    CHECK(q == p);
    // (a p)_b = p_{a^-1 b}; canonical domain order puts (0,1) before (1,0)
    Pattern ap = p.translated(a);
    CHECK(ap.at(g.mul(a, grid_elem({0, 1}))) == 1);
    CHECK(ap.at(g.mul(a, grid_elem({1, 0}))) == 2);
}

TEST_CASE("local validity on the golden mean shift") {
    Sft gm = golden_mean();
    CHECK(!locally_valid(gm, Pattern(interval(0, 3), {0, 1, 1, 0})));
    CHECK(locally_valid(gm, Pattern(interval(0, 3), {0, 1, 0, 1})));
    CHECK_THROWS_AS(locally_valid(gm, Pattern(interval(0, 0), {7})), input_error);

    // restriction preserves local validity
    Pattern p(interval(0, 3), {0, 1, 0, 0});
    CHECK(locally_valid(gm, p));
    CHECK(locally_valid(gm, p.restricted(interval(1, 2))));
}

TEST_CASE("burton-steif pair validity") {
    auto [bs, h] = burton_steif(Group::grid(2), 2);
    (void)h;
    // horizontally adjacent values -2 and 2: product -4, forbidden
    Group g = Group::grid(2);
    Domain d(g, {grid_elem({0, 0}), grid_elem({1, 0})});
    // alphabet {-2,-1,1,2} as indices {0,1,2,3}
    CHECK(!locally_valid(bs, Pattern(d, {0, 3})));
    CHECK(locally_valid(bs, Pattern(d, {1, 2}))); // -1 next to 1 is fine
}

TEST_CASE("counting locally valid words") {
    Sft gm = golden_mean();
    CHECK(count_locally_valid(gm, interval(0, 2)) == 5);
    CHECK(count_locally_valid(full_shift(Group::line(), 2), interval(0, 2)) == 8);
    CHECK(count_locally_valid(gm, interval(0, 7)) == 55);
    for (int n = 1; n <= 12; ++n)
        CHECK(count_locally_valid(gm, interval(0, n - 1)) == fib(n + 2));
}

TEST_CASE("enumeration is canonical and budget-guarded") {
    Sft gm = golden_mean();
    auto pats = collect_locally_valid(gm, interval(0, 2));
    REQUIRE(pats.size() == 5);
    CHECK(pats[0].sym == std::vector<int>{0, 0, 0});
    CHECK(pats[1].sym == std::vector<int>{0, 0, 1});
    CHECK(pats[4].sym == std::vector<int>{1, 0, 1});
    CHECK_THROWS_AS(count_locally_valid(gm, interval(0, 7), 10), budget_error);
}

TEST_CASE("global validity on the line") {
    Sft gm = golden_mean();
    CHECK(globally_valid(gm, Pattern(interval(0, 3), {0, 1, 0, 1}), GvMethod::Exact1d).v ==
          Verdict3::Valid);
    CHECK(globally_valid(gm, Pattern(interval(0, 1), {1, 1}), GvMethod::Exact1d).v ==
          Verdict3::Invalid);
    // gaps are free cells
    Domain gap(Group::line(), {line_elem(0), line_elem(2)});
    CHECK(globally_valid(gm, Pattern(gap, {1, 1}), GvMethod::Exact1d).v == Verdict3::Valid);

    // bounded oracle agrees with the exact one on verdict Invalid
    for (const Pattern& p : collect_locally_valid(gm, interval(0, 7))) {
        Validity b = globally_valid(gm, p, GvMethod::Bounded, 2);
        Validity e = globally_valid(gm, p, GvMethod::Exact1d);
        if (b.v == Verdict3::Invalid) CHECK(e.v == Verdict3::Invalid);
    }
}

TEST_CASE("sft approximation") {
    // the two-symbol path shift around symbol 1: forbid {02, 20} on window {0,1}
    Group line = Group::line();
    Alphabet a3 = Alphabet::indexed(3);
    auto in_lang = [&](const Pattern& p) {
        // adjacent symbols differ by at most one (path graph 0-1-2)
        for (int i = 0; i + 1 < static_cast<int>(p.dom.size()); ++i) {
            int u = p.sym[static_cast<std::size_t>(i)], v = p.sym[static_cast<std::size_t>(i + 1)];
            if (std::abs(u - v) > 1) return false;
        }
        return true;
    };
    Sft approx = sft_approximation(in_lang, line, a3, interval(0, 1));
    CHECK(approx.forbidden.size() == 2);
    CHECK(approx.is_forbidden({0, 2}));
    CHECK(approx.is_forbidden({2, 0}));

    Sft full = sft_approximation([](const Pattern&) { return true; }, line, a3, interval(0, 1));
    CHECK(full.forbidden.empty());

    Sft gm = golden_mean();
    auto gm_lang = [&](const Pattern& p) { return locally_valid(gm, p); };
    Sft gm2 = sft_approximation(gm_lang, line, Alphabet::binary(), interval(0, 1));
    CHECK(gm2.forbidden == gm.forbidden);
}

TEST_CASE("periodic configurations") {
    PeriodicConfig w = PeriodicConfig::line_word({0, 1, 0});
    CHECK(w.at(line_elem(0)) == 0);
    CHECK(w.at(line_elem(1)) == 1);
    CHECK(w.at(line_elem(3)) == 0);
    CHECK(w.at(line_elem(-2)) == 1);

    PeriodicConfig g = PeriodicConfig::grid_box(2, {2, 2}, {0, 1, 1, 0});
    CHECK(g.at(grid_elem({0, 0})) == 0);
    CHECK(g.at(grid_elem({1, 0})) == 1);
    CHECK(g.at(grid_elem({-1, -1})) == 0);
    CHECK(locally_valid(golden_mean(), PeriodicConfig::line_word({0, 1})));
    CHECK(!locally_valid(golden_mean(), PeriodicConfig::line_word({1})));
}
