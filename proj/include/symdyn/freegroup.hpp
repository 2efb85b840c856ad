#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/sft.hpp"

namespace symdyn {

// Nearest-neighbor SFT on the free group F_k: one allowed-pair relation per
// positive generator; inverse directions are the transposes. The window is
// {1_G} together with the generators.
struct NnFreeSft {
    int k = 2;
    int nsym = 2;
    // allowed[i][a][b]: symbol a at cell c, symbol b at cell c*a_{i+1}
    std::vector<std::vector<std::vector<char>>> allowed;

    bool pair_ok(int letter, int a, int b) const {
        // letter: +i / -i, 1-based
        int i = std::abs(letter) - 1;
        return letter > 0 ? allowed[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]
                                   [static_cast<std::size_t>(b)] != 0
                          : allowed[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]
                                   [static_cast<std::size_t>(a)] != 0;
    }
};

// The same subshift as a window-{1_G} u S Sft (for interop with patterns).
Sft to_sft(const NnFreeSft& x);

// Greatest fixpoint of "has an allowed surviving neighbor in every direction";
// empty iff the subshift is empty.
std::vector<int> essential_symbols(const NnFreeSft& x);

// Exact gluing decision for two patterns with disjoint domains, by
// arc-consistent propagation over the prefix tree spanned by the domains.
bool glue_check(const NnFreeSft& x, const Pattern& p, const Pattern& q);

struct SiVerdict {
    bool found = false;
    int gap = -1;        // least R such that distance >= R always glues
    int r0 = 1;          // pinned-ball radius certified
    int rmax = 0;
};

// Least R <= rmax such that every pair of locally valid patterns pinned on
// B_r0 and a*B_r0 glues whenever d >= R; decided exactly for ball-shaped pins
// by propagation-state saturation along connecting geodesics.
SiVerdict is_strongly_irreducible(const NnFreeSft& x, int r0, int rmax);

// Bounded periodic-point search over labeled finite quotients: for each degree
// up to the bound, every tuple of permutations (first one in cycle-type
// canonical form) and a backtracking vertex labeling.
struct PeriodicSearch {
    bool found = false;
    int degree_bound = 0;
    std::optional<PeriodicConfig> config;
};

PeriodicSearch find_periodic_point(const NnFreeSft& x, int degree_bound);

// Reproducible random instance: each directed pair allowed independently with
// probability `density` drawn from a counter-based generator.
NnFreeSft random_sft(int k, int alphabet_size, double density, std::uint64_t seed);

struct SearchRecord {
    std::uint64_t index = 0;
    bool nonempty = false;
    bool si = false;
    int gap = -1;
    bool periodic_found = false;
    int degree = -1; // degree of the found quotient
};

struct SearchReport {
    std::uint64_t seed = 0;
    std::uint64_t count = 0;
    int k = 2;
    int alphabet = 2;
    double density = 0.5;
    int rmax = 4;
    int degree_bound = 4;
    std::vector<SearchRecord> records;
    std::vector<std::uint64_t> candidates; // SI but no periodic point found
    double seconds = 0.0;
};

// Generates `count` seeded instances; every strongly irreducible nonempty one
// is searched for a periodic point; the ones without any within the degree
// bound are logged as candidates for manual scrutiny. Verdicts are assembled
// in index order, independent of the worker count.
SearchReport search_counterexample(int k, int alphabet_size, double density, std::uint64_t count,
                                   int rmax, int degree_bound, std::uint64_t seed, int jobs = 1);

} // namespace symdyn
