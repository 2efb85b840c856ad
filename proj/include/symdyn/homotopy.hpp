#pragma once

#include "symdyn/engine.hpp"

namespace symdyn {

// A homotopy: a block map whose input carries a time track over {0..k-1} plus
// configuration tracks, with declared endpoint maps. At time all-0 the rule
// must agree with the left endpoint map, at time all-(k-1) with the right one.
// Contraction homotopies are the two-configuration-track case [time | X | X]
// whose endpoints are the projections.
struct Homotopy {
    BlockMap map;     // [time | config tracks] -> target alphabet
    Sft target;       // codomain (the contracted subshift, for contractions)
    int time_symbols = 2;
    Domain time_nbhd; // time-track cells the rule may inspect
    // endpoint identities hold for arbitrary track contents (rules that
    // dispatch on the time track alone); else only for locally valid contents
    bool endpoints_all_contents = true;
    // validity constraints on the source, absolute track indices (time = 0)
    std::vector<TrackConstraint> constraints;
    // endpoint maps lifted to the full source alphabet (they ignore the time track)
    BlockMap left_map;
    BlockMap right_map;
    bool two_config_tracks = false;

    int x_track() const { return 1; }
    int y_track() const { return 1 + target.alphabet.num_tracks(); }
};

struct ContractionReport {
    CheckStatus status = CheckStatus::Unknown;
    CheckResult endpoint_left;
    CheckResult endpoint_right;
    CheckResult into;
    CheckResult diagonal;
    bool diagonal_checked = false;
    std::string failed_stage;
};

// Copies f(x) where the time symbol is 0 and g(x) where it is 1. The
// config_constraints use track indices relative to the first config track.
Homotopy naive_homotopy(const BlockMap& f, const BlockMap& g,
                        std::vector<TrackConstraint> config_constraints, const Sft& target);
// The naive homotopy between the two projections of X x X.
Homotopy naive_contraction(const Sft& x);

// Three-case rule around a safe symbol. Validates safety by exhaustive
// single-cell replacement over locally valid patterns; rejects with a
// violating pattern otherwise.
Homotopy safe_symbol_homotopy(const Sft& x, int safe);

// Sign shift: alphabet {-M..-1, 1..M}, adjacent symbols may differ in sign
// only when both are +-1; with its five-case contraction rule.
std::pair<Sft, Homotopy> burton_steif(const Group& g, int m);

// Proper colorings with alphabet_size > |S| colors, contracted by staged
// recoloring; the stage function picks the least color absent from the
// neighborhood.
std::pair<Sft, Homotopy> coloring_homotopy(const Group& g, int alphabet_size);

// Rule for subshifts whose forbidden patterns avoid `zero` and have
// S-connected domains: copy where time is locally constant, write zero else.
Homotopy z0_homotopy(const Sft& x, int zero);

// Total extension of a contraction homotopy's rule: same neighborhood,
// copies track 1 (resp. 2) where the time window is all 0 (resp. all 1),
// uses the original rule where both configuration windows are locally valid,
// and falls back to the first alphabet symbol elsewhere.
BlockMap natural_extension(const Homotopy& h);

enum class DilationVariant { BallMin, ZMinMax };

// Time-track dilations: BallMin sends I into the subshift where every 0 lies
// in a radius-n 0-ball; ZMinMax (line only) is min over [0,10n] then max over
// [0,n], making every maximal run of both symbols have length >= n.
BlockMap dilation(const Group& g, int n, DilationVariant variant);

// Homotopy over I_m precomposed with the endpoint-respecting map I_2 -> I_m
// (0 -> 0, 1 -> m-1).
Homotopy ksymbol_reduce(const Homotopy& h);
// Inverse direction used in tests: feed the binary rule an I_m time track.
Homotopy ksymbol_lift(const Homotopy& h, int m);

// Checks (i) both endpoint identities at rule level, (ii) the map sends
// I_k x X x X into the target at the given margin, (iii) optionally the
// diagonal identity h(t,x,x) = x over locally valid contents.
ContractionReport verify_contraction(const Homotopy& h, int margin, bool diagonal,
                                     const EngineOptions& opt = {});
ContractionReport verify_contraction(const Homotopy& h, const EngineOptions& opt = {});

// Source spec of the homotopy's input product shift.
SourceSpec homotopy_source(const Homotopy& h);

} // namespace symdyn
