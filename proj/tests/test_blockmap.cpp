#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symdyn/homotopy.hpp"

using namespace symdyn;

namespace {

Group line = Group::line();

// x_i XOR x_{i+1} on the binary line shift
BlockMap xor_rule() {
    // table over neighborhood {0,1}: index = 2*x_0 + x_1
    return table_map(line, Alphabet::binary(), Alphabet::binary(), interval(0, 1), {0, 1, 1, 0});
}

Pattern word(std::vector<int> w) {
    int n = static_cast<int>(w.size());
    return Pattern(interval(0, n - 1), std::move(w));
}

} // namespace

TEST_CASE("apply") {
    BlockMap id = identity_map(line, Alphabet::binary());
    Pattern p = word({0, 1, 1, 0});
    CHECK(apply(id, p) == p);

    Pattern q = apply(xor_rule(), p);
    CHECK(q.dom == interval(0, 2));
    CHECK(q.sym == std::vector<int>{1, 0, 1});

    // min rule over B_1 on grid(2) on an all-ones 3x3 pattern
    Group g2 = Group::grid(2);
    BlockMap mn = min_map(g2, ball(g2, 1));
    std::vector<Elem> cells;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) cells.push_back(grid_elem({i, j}));
    Pattern ones(Domain(g2, cells), std::vector<int>(9, 1));
    Pattern out = apply(mn, ones);
    CHECK(out.dom.size() == 1);
    CHECK(out.sym[0] == 1);

    // empty output domain is legal
    Pattern tiny = word({1});
    CHECK(apply(xor_rule(), tiny).dom.empty());
}

TEST_CASE("compose") {
    BlockMap x = xor_rule();
    BlockMap id = identity_map(line, Alphabet::binary());
    Pattern p = word({0, 1, 1, 0, 0});
    CHECK(apply(compose(id, x), p) == apply(x, p));
    CHECK(apply(compose(x, id), p) == apply(x, p));

    // second difference on 01100: first pass 1010, second pass 111
    Pattern dd = apply(compose(x, x), p);
    CHECK(dd.sym == std::vector<int>{1, 1, 1});
    CHECK(compose(x, x).nbhd == interval(0, 2));

    // apply-level equality of both associations
    BlockMap a = compose(x, compose(x, x));
    BlockMap b = compose(compose(x, x), x);
    Pattern w = word({1, 0, 1, 1, 0, 0, 1, 0});
    CHECK(apply(a, w) == apply(b, w));
}

TEST_CASE("product acts trackwise") {
    BlockMap x = xor_rule();
    BlockMap id = identity_map(line, Alphabet::binary());
    BlockMap pr = product({x, id});
    CHECK(pr.nbhd == interval(0, 1));
    CHECK(pr.source.num_tracks() == 2);
    // paired word ((0,a),(1,b)) with a=0, b=1
    Alphabet pa = pr.source;
    Pattern p(interval(0, 1),
              {pa.flatten(std::vector<int>{0, 0}), pa.flatten(std::vector<int>{1, 1})});
    Pattern out = apply(pr, p);
    CHECK(out.dom == interval(0, 0));
    CHECK(out.sym[0] == pr.target.flatten(std::vector<int>{1, 0}));

    BlockMap idp = product({id, id});
    Pattern q(interval(0, 2), {0, 3, 2});
    CHECK(apply(idp, q) == q);
}

TEST_CASE("shift commutation on random inputs") {
    // apply(f, translate(a,p)) = translate(a, apply(f,p))
    BlockMap maps[] = {xor_rule(), compose(xor_rule(), xor_rule())};
    for (const BlockMap& f : maps) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            std::vector<int> w;
            for (int i = 0; i < 7; ++i)
                w.push_back(static_cast<int>(hash_counters(seed, 7, static_cast<std::uint64_t>(i)) & 1));
            Pattern p = word(w);
            int shift = static_cast<int>(hash_counters(seed, 11) % 9) - 4;
            Elem a = line_elem(shift);
            CHECK(apply(f, p.translated(a)) == apply(f, p).translated(a));
        }
    }
}

TEST_CASE("check_into: identity maps the golden mean into itself") {
    Sft gm = golden_mean();
    BlockMap id = identity_map(line, gm.alphabet);
    CheckResult r = check_into(id, gm, gm, 0);
    CHECK(r.status == CheckStatus::Proved);
}

TEST_CASE("check_into: identity does not map the full shift into the golden mean") {
    Sft gm = golden_mean();
    BlockMap id = identity_map(line, gm.alphabet);
    CheckResult r = check_into(id, full_shift(line, 2), gm, 1);
    REQUIRE(r.status == CheckStatus::Counterexample);
    REQUIRE(r.witness.has_value());
    // the witness output contains 11 and really is a full-shift point
    CHECK(r.witness->confirmation.v == Verdict3::Valid);
    CHECK(!locally_valid(gm, r.witness->output));
}

TEST_CASE("check_into: naive contraction of the golden mean has a seam defect") {
    Sft gm = golden_mean();
    Homotopy h = naive_contraction(gm);
    CheckResult r = check_into(h.map, homotopy_source(h), gm, 1);
    REQUIRE(r.status == CheckStatus::Counterexample);
    // confirmed genuine: both configuration tracks are globally valid
    CHECK(r.witness->confirmation.v == Verdict3::Valid);
}

TEST_CASE("check_into: safe-symbol rule maps the golden mean product into it") {
    Sft gm = golden_mean();
    Homotopy h = safe_symbol_homotopy(gm, 0);
    CheckResult r = check_into(h.map, homotopy_source(h), gm, 1);
    CHECK(r.status == CheckStatus::Proved);
}

TEST_CASE("check_into is thread-count independent") {
    Sft gm = golden_mean();
    Homotopy h = naive_contraction(gm);
    EngineOptions opt1, opt4;
    opt1.jobs = 1;
    opt4.jobs = 4;
    CheckResult a = check_into(h.map, homotopy_source(h), gm, 1, opt1);
    CheckResult b = check_into(h.map, homotopy_source(h), gm, 1, opt4);
    REQUIRE(a.status == b.status);
    REQUIRE(a.witness.has_value());
    REQUIRE(b.witness.has_value());
    CHECK(a.witness->input == b.witness->input);
    CHECK(a.witness->output == b.witness->output);

    Homotopy s = safe_symbol_homotopy(gm, 0);
    CHECK(check_into(s.map, homotopy_source(s), gm, 1, opt4).status == CheckStatus::Proved);
}

TEST_CASE("budget exhaustion reports unknown") {
    Sft gm = golden_mean();
    Homotopy h = safe_symbol_homotopy(gm, 0);
    EngineOptions opt;
    opt.budget = 3;
    CheckResult r = check_into(h.map, homotopy_source(h), gm, 1, opt);
    CHECK(r.status == CheckStatus::Unknown);
}
