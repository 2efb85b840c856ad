#pragma once

#include <map>

#include "symdyn/homotopy.hpp"

namespace symdyn {

// Window-{0,1} presentation of a line SFT: vertices are the locally valid
// higher blocks, edges the allowed adjacencies, pruned to the essential part
// (every vertex has in- and out-degree >= 1).
struct TransitionGraph {
    int nvert = 0;
    std::vector<std::vector<int>> block_words; // original-symbol word per vertex
    std::vector<std::vector<char>> adj;
    bool essentialized = false;

    bool edge(int u, int v) const { return adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] != 0; }
};

// Conjugacy between a line SFT and its essential vertex-shift presentation.
struct Recode1d {
    TransitionGraph graph;
    Sft vertex_sft;     // window {0,1}; alphabet = essential blocks
    BlockMap to_vertex; // neighborhood [0, L-2]; non-block words map to vertex 0
    BlockMap from_vertex;
    int block_len = 1;
};

Recode1d recode_to_vertex_shift(const Sft& x);

// Convenience: the vertex shift on `nsym` symbols with the given allowed
// adjacency matrix (row = left symbol).
Sft vertex_sft(int nsym, const std::vector<std::vector<char>>& allowed);

struct OneDimReport {
    bool empty = true;
    std::vector<int> essential_vertices;        // vertex count per se
    std::vector<std::vector<int>> essential_blocks; // block words of the essential presentation
    bool transitive = false;
    bool mixing = false;
    int gap = -1;             // least n: every pair joined by a length-n transition word
    int period = -1;          // primitive period (transitive case)
    std::vector<int> period_set; // P(X) sample up to the requested bound
    int profile_bound = 0;
};

// Mixing decided by primitivity of the essential adjacency matrix (gap search
// capped at the Wielandt bound (|V|-1)^2 + 1); primitive period by the gcd of
// cycle lengths; P(X) from positive traces of matrix powers.
OneDimReport analyze_1d(const Sft& x, int period_bound = 16);

// Exact decision whether a line pattern appears in a configuration, by
// feasibility over the essential transition graph. Never Unknown.
Validity exact_valid_1d(const Sft& x, const Pattern& p);

// For every pair of globally valid symbols, the lexicographically least word
// v of length n with avb locally and globally valid; input error when a pair
// admits none.
std::map<std::pair<int, int>, std::vector<int>> transition_words(const Sft& x, int n);

// The contraction homotopy of a mixing line SFT, built on its essential
// vertex presentation: the transition-word seam rule over dilated time.
struct MixingHomotopy {
    Recode1d recode;
    Homotopy homotopy; // over recode.vertex_sft
    int gap = 0;
    std::map<std::pair<int, int>, std::vector<int>> vtable; // vertex-symbol pairs
};

MixingHomotopy mixing_contraction_homotopy(const Sft& x);

enum class HEquivVerdict { Equivalent, NotEquivalent };

// Transitive line SFTs map into each other iff their period sets agree;
// decided by primitive periods plus the trace-positivity profile up to
// max(bound, |V_X|^2, |V_Y|^2) * lcm(p_X, p_Y).
HEquivVerdict homotopy_equivalent_transitive(const Sft& x, const Sft& y, int bound = 8);

} // namespace symdyn
