#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symdyn {

// Bad arguments, mismatched alphabets/groups, malformed files.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration or search hit its configured ceiling.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what, std::uint64_t bound)
        : std::runtime_error(what + " (budget " + std::to_string(bound) + ")"), bound(bound) {}
    std::uint64_t bound;
};

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

// Counter-based generator: a pure function of (seed, counters), so parallel
// workers can draw the same stream without shared state.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_counters(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// Uniform in [0, n) from a counter draw.
inline std::uint64_t draw_below(std::uint64_t hash, std::uint64_t n) {
    return n == 0 ? 0 : hash % n;
}

} // namespace symdyn
