#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symdyn/homotopy.hpp"

using namespace symdyn;

namespace {
Group line = Group::line();
}

TEST_CASE("naive homotopy endpoints and verdicts") {
    // f = g = identity on the full binary shift: contraction proved trivially
    Sft full2 = full_shift(line, 2);
    Homotopy triv = naive_contraction(full2);
    ContractionReport r = verify_contraction(triv, 1, false);
    CHECK(r.status == CheckStatus::Proved);

    // the two projections on the golden mean are not naively gluable
    Sft gm = golden_mean();
    Homotopy h = naive_contraction(gm);
    ContractionReport bad = verify_contraction(h, 1, false);
    CHECK(bad.status == CheckStatus::Counterexample);
    CHECK(bad.failed_stage == "into");
    // endpoint identities still hold at rule level
    CHECK(bad.endpoint_left.status == CheckStatus::Proved);
    CHECK(bad.endpoint_right.status == CheckStatus::Proved);
}

TEST_CASE("safe symbol homotopy on the golden mean") {
    Sft gm = golden_mean();
    Homotopy h = safe_symbol_homotopy(gm, 0);
    ContractionReport r = verify_contraction(h, 1, false);
    CHECK(r.status == CheckStatus::Proved);

    // 1 is not safe: placing it next to a 1 creates the forbidden word
    CHECK_THROWS_AS(safe_symbol_homotopy(gm, 1), input_error);

    // any symbol is safe on a full shift
    Homotopy f = safe_symbol_homotopy(full_shift(line, 3), 2);
    CHECK(verify_contraction(f, 0, false).status == CheckStatus::Proved);
}

TEST_CASE("safe symbol homotopy fails the diagonal identity") {
    // the rule writes the safe symbol on mixed time windows even when both
    // configuration tracks agree
    Sft gm = golden_mean();
    Homotopy h = safe_symbol_homotopy(gm, 0);
    ContractionReport r = verify_contraction(h, 1, true);
    CHECK(r.status == CheckStatus::Counterexample);
    CHECK(r.failed_stage == "diagonal");
    CHECK(r.into.status == CheckStatus::Proved);
}

TEST_CASE("naive contraction of a full shift is equiconnected") {
    Sft full2 = full_shift(line, 2);
    Homotopy h = naive_contraction(full2);
    ContractionReport r = verify_contraction(h, 1, true);
    CHECK(r.status == CheckStatus::Proved);
}

TEST_CASE("burton-steif") {
    SUBCASE("line M=1 is a full shift") {
        auto [sft, h] = burton_steif(line, 1);
        CHECK(sft.forbidden.empty());
        CHECK(verify_contraction(h, 1, false).status == CheckStatus::Proved);
    }
    SUBCASE("grid M=2") {
        auto [sft, h] = burton_steif(Group::grid(2), 2);
        CHECK(sft.alphabet.size() == 4);
        // adjacent opposite signs are forbidden unless both are +-1
        Domain pair(Group::grid(2), {grid_elem({0, 0}), grid_elem({0, 1})});
        CHECK(!locally_valid(sft, Pattern(pair, {0, 2}))); // -2 next to 1
        CHECK(locally_valid(sft, Pattern(pair, {1, 2})));  // -1 next to 1
        ContractionReport r = verify_contraction(h, 2, false);
        CHECK(r.status == CheckStatus::Proved);
    }
}

TEST_CASE("coloring homotopy") {
    SUBCASE("line with three colors") {
        auto [sft, h] = coloring_homotopy(line, 3);
        CHECK(sft.alphabet.size() == 3);
        ContractionReport r = verify_contraction(h, 2, false);
        CHECK(r.status == CheckStatus::Proved);
    }
    SUBCASE("alphabet bound is enforced") {
        CHECK_THROWS_AS(coloring_homotopy(Group::grid(2), 4), input_error);
        CHECK_THROWS_AS(coloring_homotopy(line, 2), input_error);
    }
}

TEST_CASE("z0 homotopy") {
    Sft gm = golden_mean();
    Homotopy h = z0_homotopy(gm, 0);
    CHECK(verify_contraction(h, 1, false).status == CheckStatus::Proved);

    // an SFT forbidding 00 has 0 inside a forbidden pattern
    Sft bad(line, Alphabet::binary(), interval(0, 1), {{0, 0}});
    CHECK_THROWS_AS(z0_homotopy(bad, 0), input_error);

    // disconnected window {0, 2}
    Domain gap(line, {line_elem(0), line_elem(2)});
    Sft spread(line, Alphabet::binary(), gap, {{1, 1}});
    CHECK_THROWS_AS(z0_homotopy(spread, 0), input_error);
}

TEST_CASE("natural extension behavior") {
    Sft gm = golden_mean();
    Homotopy h = safe_symbol_homotopy(gm, 0);
    BlockMap ext = natural_extension(h);
    CHECK(ext.nbhd == h.map.nbhd);

    // on valid inputs the extension agrees with the rule on all windows
    SourceSpec src = homotopy_source(h);
    CheckResult same = check_maps_agree(ext, h.map, src, true);
    CHECK(same.status == CheckStatus::Proved);

    // time all 0 with an invalid x-track still copies the x-track verbatim
    Alphabet sa = h.map.source;
    auto sym = [&](int t, int x, int y) { return sa.flatten(std::vector<int>{t, x, y}); };
    Pattern p(interval(-1, 1), {sym(0, 1, 0), sym(0, 1, 0), sym(0, 1, 1)});
    Pattern out = apply(ext, p);
    CHECK(out.at(line_elem(0)) == 1);

    // determinism on mixed-time invalid inputs
    Pattern q(interval(-1, 1), {sym(0, 1, 0), sym(1, 1, 0), sym(0, 1, 1)});
    CHECK(apply(ext, q) == apply(ext, q));
}

TEST_CASE("dilation") {
    SUBCASE("endpoints are fixed") {
        for (auto variant : {DilationVariant::BallMin, DilationVariant::ZMinMax}) {
            BlockMap d = dilation(line, 2, variant);
            PeriodicConfig zeros = PeriodicConfig::line_word({0});
            PeriodicConfig ones = PeriodicConfig::line_word({1});
            CHECK(apply(d, zeros).sym == std::vector<int>{0});
            CHECK(apply(d, ones).sym == std::vector<int>{1});
        }
    }
    SUBCASE("ball min on the alternating word") {
        BlockMap d = dilation(line, 2, DilationVariant::BallMin);
        PeriodicConfig alt = PeriodicConfig::line_word({0, 1});
        PeriodicConfig out = apply(d, alt);
        CHECK(out.sym == std::vector<int>{0, 0});
    }
    SUBCASE("ball min output lands in the dilated subshift") {
        // every 0 of the output has a radius-n 0-ball within distance n
        int n = 2;
        BlockMap d = dilation(line, n, DilationVariant::BallMin);
        for (std::uint64_t seed = 0; seed < 16; ++seed) {
            std::vector<int> w;
            for (int i = 0; i < 11; ++i)
                w.push_back(
                    static_cast<int>(hash_counters(seed, 3, static_cast<std::uint64_t>(i)) & 1));
            PeriodicConfig c = apply(d, PeriodicConfig::line_word(w));
            int period = static_cast<int>(c.sym.size());
            for (int i = 0; i < period; ++i) {
                if (c.at(line_elem(i)) != 0) continue;
                bool ok = false;
                for (int b = i - n; b <= i + n && !ok; ++b) {
                    bool all0 = true;
                    for (int j = b - n; j <= b + n; ++j)
                        if (c.at(line_elem(j)) != 0) {
                            all0 = false;
                            break;
                        }
                    ok = all0;
                }
                CHECK(ok);
            }
        }
    }
    SUBCASE("min-max dilation produces long runs of both symbols") {
        int n = 2;
        BlockMap d = dilation(line, n, DilationVariant::ZMinMax);
        for (std::uint64_t seed = 0; seed < 16; ++seed) {
            std::vector<int> w;
            for (int i = 0; i < 13; ++i)
                w.push_back(
                    static_cast<int>(hash_counters(seed, 5, static_cast<std::uint64_t>(i)) & 1));
            PeriodicConfig c = apply(d, PeriodicConfig::line_word(w));
            int period = static_cast<int>(c.sym.size());
            // measure maximal runs over the periodic configuration
            for (int i = 0; i < period; ++i) {
                bool start = c.at(line_elem(i)) != c.at(line_elem(i - 1));
                if (!start) continue;
                int len = 1;
                while (len < 4 * period && c.at(line_elem(i + len)) == c.at(line_elem(i))) ++len;
                CHECK(len >= n);
            }
        }
    }
}

TEST_CASE("k-symbol reduction") {
    Sft gm = golden_mean();
    Homotopy h = safe_symbol_homotopy(gm, 0);
    // binary homotopies reduce to themselves
    Homotopy same = ksymbol_reduce(h);
    CHECK(same.time_symbols == 2);

    // lift to I_3, reduce back: verification verdict class is preserved
    Homotopy lifted = ksymbol_lift(h, 3);
    CHECK(lifted.time_symbols == 3);
    ContractionReport lr = verify_contraction(lifted, 1, false);
    CHECK(lr.status == CheckStatus::Proved);
    Homotopy back = ksymbol_reduce(lifted);
    CHECK(back.time_symbols == 2);
    ContractionReport br = verify_contraction(back, 1, false);
    CHECK(br.status == CheckStatus::Proved);

    // endpoint at the top symbol maps to the right endpoint
    Alphabet sa = lifted.map.source;
    Pattern p(interval(-1, 1),
              {sa.flatten(std::vector<int>{2, 0, 1}), sa.flatten(std::vector<int>{2, 0, 1}),
               sa.flatten(std::vector<int>{2, 0, 0})});
    Pattern out = apply(lifted.map, p);
    CHECK(out.at(line_elem(0)) == 1);
}
