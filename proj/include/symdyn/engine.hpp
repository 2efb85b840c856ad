#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "symdyn/blockmap.hpp"

namespace symdyn {

// A constraint on a contiguous track range of a product source: the projection
// to tracks [track, track + sft.alphabet.num_tracks()) must avoid the SFT's
// forbidden windows. Unconstrained tracks are full shifts.
struct TrackConstraint {
    int track = 0;
    Sft sft;
};

// Source side of a check: alphabet plus factored validity constraints.
// tied_tracks forces two track ranges equal cellwise (diagonal checks);
// pinned_tracks fixes a track to a constant symbol (endpoint checks).
struct SourceSpec {
    Group group;
    Alphabet alphabet;
    std::vector<TrackConstraint> constraints;
    std::vector<std::pair<int, int>> tied_tracks;
    std::vector<std::pair<int, int>> pinned_tracks;

    static SourceSpec from_sft(const Sft& x) {
        SourceSpec s;
        s.group = x.group;
        s.alphabet = x.alphabet;
        s.constraints.push_back({0, x});
        return s;
    }
};

enum class CheckStatus { Proved, Counterexample, Unknown };

struct Witness {
    Pattern input;  // locally valid on the whole enumeration domain
    Pattern output; // the offending output window
    Validity confirmation; // global validity of the input core (genuine vs margin-limited)
};

struct CheckResult {
    CheckStatus status = CheckStatus::Unknown;
    std::optional<Witness> witness;
    int margin = 0;
    std::uint64_t nodes = 0;
    std::string note;
};

struct EngineOptions {
    std::uint64_t budget = 1ull << 34;
    int jobs = 1;
    bool confirm_witness = true;
};

// Complete finite-scale proof that f maps x into y: enumerates (by
// need-driven search) every input that is locally valid on W_y * N_f * B_margin
// and checks that the centered output window is never forbidden in y.
// Proved certifies f(x) inside y; it moreover certifies the same for the SFT
// whose forbidden patterns are the locally invalid W_y*N_f*B_margin-patterns
// of x, which is how "sufficiently good approximation" margins are exposed.
// A found witness is completed to a fully locally valid pattern on the whole
// enumeration domain and then confirmed (or not) against global validity.
CheckResult check_into(const BlockMap& f, const SourceSpec& x, const Sft& y, int margin,
                       const EngineOptions& opt = {});
CheckResult check_into(const BlockMap& f, const Sft& x, const Sft& y, int margin,
                       const EngineOptions& opt = {});

// Default margin: diameter of the target window.
int default_margin(const Sft& y);

// Searches for an input (locally valid when valid_only, arbitrary contents
// otherwise) on which two maps disagree at the identity. Used for endpoint
// identities, diagonal (equiconnectedness) checks, and retraction identity
// checks. Proved means the maps agree on every input considered.
CheckResult check_maps_agree(const BlockMap& f, const BlockMap& g, const SourceSpec& x,
                             bool valid_only, const EngineOptions& opt = {});

// check_maps_agree against the projection to the track range starting at
// `track` of width target-num-tracks.
CheckResult check_equals_track(const BlockMap& f, const SourceSpec& x, int track,
                               bool valid_only, const EngineOptions& opt = {});

// Searches for an input making the output at the identity equal `symbol`
// (e.g. the blank symbol for stitching coverage checks).
CheckResult check_hits_symbol(const BlockMap& f, const SourceSpec& x, int symbol,
                              const Domain& extra_margin, const EngineOptions& opt = {});

} // namespace symdyn
