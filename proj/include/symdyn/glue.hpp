#pragma once

#include "symdyn/homotopy.hpp"

namespace symdyn {

// The grid(2) SFT of consistent edge labelings with even plaquettes, together
// with the edge-difference map from the binary full shift onto it. Symbols
// are bit vectors indexed by the generators in canonical order.
std::pair<Sft, BlockMap> cocycle_sft();

// Exact global validity for the builtin cocycle SFT: a pattern appears in a
// configuration iff the labels admit a potential, i.e. every cycle through
// its cells sums to zero.
Validity cocycle_exact_valid(const Sft& x, const Pattern& p);

struct RetractionResult {
    bool found = false;
    BlockMap map;       // full shift -> x
    int radius = -1;    // certified validity-test neighborhood: t reads x|a*B_radius
    CheckResult into;   // proof that the image avoids forbidden windows of x
    bool identity_ok = false; // rule-level r(x) = x on globally valid windows
    std::optional<Witness> last_witness;
    std::string note;
};

// Searches neighborhoods M = B_0, B_1, ... up to the cap; for each builds
// t_M(x)_a = 0 iff x|aM is globally valid (exact on the line, margin-bounded
// elsewhere), r_M(x) = natural_extension(h)(t_M(x), x, fixed_point), and
// returns the first candidate with a complete proof.
RetractionResult build_retraction(const Sft& x, const Homotopy& h, int fixed_point,
                                  int radius_cap = 4, const EngineOptions& opt = {});

// A block map into the target alphabet extended by a trailing blank symbol.
struct PartialMorphism {
    BlockMap map;
    int blank; // = target alphabet size of y
};

// The target alphabet of y extended by '#'.
Alphabet blank_extended(const Alphabet& a);

struct StitchResult {
    BlockMap map; // into the blank-extended alphabet; never blank when covered
    CheckResult coverage; // search for a blank output (Proved = fully covered)
    CheckResult into;     // image avoids forbidden windows of y (blank-lifted)
};

// Iterates the pairwise gluing construction over the list: detect where the
// earlier map is valid, run the natural extension of h across the seam.
// Coverage is checked a posteriori over the given source spec; `coverage_n`
// adds enumeration margin around the checked cell.
StitchResult stitch(const std::vector<PartialMorphism>& fs, const SourceSpec& x_spec,
                    const Sft& y, const Homotopy& h, const Domain& coverage_n,
                    const EngineOptions& opt = {});

struct FactorResult {
    BlockMap map;      // the composite x -> y
    CheckResult f_into; // precondition: f maps x into y
    CheckResult into;   // the composite maps x into y
};

// Composite "copy g where its output looks valid, fall back to f elsewhere":
// time track from forbidden-pattern detection on g over the window a*MNM.
FactorResult factor_onto_contractible(const BlockMap& f, const BlockMap& g,
                                      const SourceSpec& x_spec, const Sft& y,
                                      const Homotopy& h, const EngineOptions& opt = {});

struct FepResult {
    bool failed = false;
    int reached_radius = 0;
    std::optional<Domain> core;      // D of the witness
    std::optional<Pattern> witness;  // locally valid on D*gap, invalid on D
    Validity witness_check;
    std::string note;
};

// Extension-property sweep: over box domains (line: intervals; grid:
// rectangles and box annuli) up to test_radius, every pattern locally valid
// on D*B_gap must restrict to a globally valid pattern on D. Exhaustive where
// the enumeration fits the budget; for the builtin cocycle SFT, annulus
// domains are probed with directed cut candidates instead (exhaustive
// enumeration over the 16-symbol alphabet is out of reach); with only the
// bounded oracle available the pass is certified structurally, since any
// locally valid pattern on D*B_gap is its own bounded-validity certificate
// for gap-sized margins.
FepResult fep_check(const Sft& x, int gap_radius, int test_radius,
                    std::uint64_t budget = 1ull << 22);

} // namespace symdyn
