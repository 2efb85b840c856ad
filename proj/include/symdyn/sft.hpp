#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/pattern.hpp"

namespace symdyn {

// Subshift of finite type: alphabet + window (containing 1_G) + forbidden
// window patterns. Local validity of any pattern is checked against window
// translates lying inside the pattern's domain.
struct Sft {
    Group group;
    Alphabet alphabet;
    Domain window;
    std::vector<std::vector<int>> forbidden; // each entry aligned with window.cells()
    std::string builtin;                     // "" or a builtin tag, e.g. "cocycle"

    Sft() = default;
    Sft(Group g, Alphabet a, Domain w, std::vector<std::vector<int>> forb,
        std::string builtin_tag = "");

    bool is_forbidden(const std::vector<int>& wpat) const;
    // Partial window contents (-1 = undetermined): true iff every completion
    // is forbidden. This is how constraints with support smaller than the
    // window (say adjacent-pair rules) bind through partially overlapping
    // window translates.
    bool forced_forbidden(const std::vector<int>& partial) const;
    std::size_t window_size() const { return window.size(); }

    bool operator==(const Sft& o) const {
        return group == o.group && alphabet == o.alphabet && window == o.window &&
               forbidden == o.forbidden;
    }
};

// The two standing fixtures.
Sft full_shift(const Group& g, int alphabet_size);
Sft golden_mean(); // binary line shift forbidding 11

// True iff no window translate inside domain(p) carries a forbidden pattern.
bool locally_valid(const Sft& x, const Pattern& p);

// Local validity of a periodic configuration (checked on the quotient).
bool locally_valid(const Sft& x, const PeriodicConfig& c);

// Streams exactly the locally valid patterns on d, in canonical order
// (cells in canonical order, symbols ascending), each exactly once.
// Throws budget_error when the node budget is exhausted.
void enumerate_locally_valid(const Sft& x, const Domain& d,
                             const std::function<void(const Pattern&)>& yield,
                             std::uint64_t budget = 1ull << 32);
std::vector<Pattern> collect_locally_valid(const Sft& x, const Domain& d,
                                           std::uint64_t budget = 1ull << 32);
std::uint64_t count_locally_valid(const Sft& x, const Domain& d,
                                  std::uint64_t budget = 1ull << 32);

enum class Verdict3 { Valid, Invalid, Unknown };

struct Validity {
    Verdict3 v = Verdict3::Unknown;
    int margin = -1;  // for margin-certified Valid verdicts
    std::string note;
};

enum class GvMethod { Exact1d, Bounded, CocycleExact };

// Does p appear in a configuration of x?
//   Exact1d      line SFTs, decided on the essentialized transition graph; never Unknown
//   Bounded      any group; Valid means a locally valid extension to dom*B_margin
//                exists (Invalid is definitive, Valid is margin-certified)
//   CocycleExact the builtin cocycle SFT, zero-sum test on cycles
Validity globally_valid(const Sft& x, const Pattern& p, GvMethod method, int margin = 2,
                        std::uint64_t budget = 1ull << 26);

// Picks the exact method when one applies, else Bounded.
Validity globally_valid_auto(const Sft& x, const Pattern& p, int margin = 2,
                             std::uint64_t budget = 1ull << 26);

// SFT forbidding exactly the w-patterns rejected by the checker.
Sft sft_approximation(const std::function<bool(const Pattern&)>& in_language, const Group& g,
                      const Alphabet& alphabet, const Domain& w);

} // namespace symdyn
