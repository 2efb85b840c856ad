#pragma once

#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "symdyn/group.hpp"

namespace symdyn {

// Symbols are indices; names live only at the file-format boundary.
// An alphabet may be a product of tracks (time track x configuration tracks,
// etc.). A flattened symbol encodes the track tuple, track 0 most significant.
struct Alphabet {
    std::vector<std::vector<std::string>> tracks;

    Alphabet() = default;
    static Alphabet single(std::vector<std::string> names) {
        Alphabet a;
        a.tracks.push_back(std::move(names));
        return a;
    }
    static Alphabet indexed(int n, const std::string& prefix = "") {
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
        return single(std::move(names));
    }
    static Alphabet binary() { return indexed(2); }
    static Alphabet product(const std::vector<Alphabet>& parts) {
        Alphabet a;
        for (const auto& p : parts)
            for (const auto& t : p.tracks) a.tracks.push_back(t);
        return a;
    }

    int num_tracks() const { return static_cast<int>(tracks.size()); }
    int track_size(int t) const { return static_cast<int>(tracks[t].size()); }
    int size() const {
        int s = 1;
        for (const auto& t : tracks) s *= static_cast<int>(t.size());
        return s;
    }

    int flatten(std::span<const int> parts) const {
        int s = 0;
        for (int t = 0; t < num_tracks(); ++t) s = s * track_size(t) + parts[t];
        return s;
    }
    std::vector<int> unflatten(int flat) const {
        std::vector<int> parts(num_tracks());
        for (int t = num_tracks() - 1; t >= 0; --t) {
            parts[t] = flat % track_size(t);
            flat /= track_size(t);
        }
        return parts;
    }
    int track_of(int flat, int t) const {
        for (int u = num_tracks() - 1; u > t; --u) flat /= track_size(u);
        return flat % track_size(t);
    }

    bool operator==(const Alphabet& o) const { return tracks == o.tracks; }
    bool operator!=(const Alphabet& o) const { return !(*this == o); }
};

// Finite partial assignment domain -> symbol indices; total on its domain.
struct Pattern {
    Domain dom;
    std::vector<int> sym; // aligned with dom.cells()

    Pattern() = default;
    Pattern(Domain d, std::vector<int> s) : dom(std::move(d)), sym(std::move(s)) {
        if (dom.size() != sym.size()) throw input_error("pattern symbol count mismatch");
    }

    int at(const Elem& e) const {
        int i = dom.index_of(e);
        if (i < 0) throw input_error("pattern lookup outside domain");
        return sym[static_cast<std::size_t>(i)];
    }

    // Translation (a p)_b = p_{a^-1 b}.
    Pattern translated(const Elem& a) const {
        Domain d = dom.translated(a);
        std::vector<int> s(sym.size());
        const Group& g = dom.group();
        Elem ai = g.inv(a);
        for (std::size_t i = 0; i < d.size(); ++i)
            s[i] = at(g.mul(ai, d[i]));
        return Pattern(std::move(d), std::move(s));
    }

    // Restriction to a subdomain.
    Pattern restricted(const Domain& d) const {
        std::vector<int> s;
        s.reserve(d.size());
        for (const Elem& e : d.cells()) s.push_back(at(e));
        return Pattern(d, std::move(s));
    }

    bool operator==(const Pattern& o) const { return dom == o.dom && sym == o.sym; }
};

// A configuration fixed by a finite-index subgroup, stored by fundamental domain:
//   line     periods = {p}, sym has p entries, x_i = sym[i mod p]
//   grid(d)  periods = {N_1..N_d} (diagonal lattice), sym row-major over the box
//   free(k)  a finite quotient: degree vertices, one permutation per generator,
//            sym has one symbol per vertex; x_w = sym[vertex reached by reading w from 0]
struct PeriodicConfig {
    Group group;
    std::vector<int> periods;
    int degree = 0;
    std::vector<std::vector<int>> perms; // free only, 0-based, perms[i] for generator a_{i+1}
    std::vector<int> sym;

    static PeriodicConfig line_word(std::vector<int> word) {
        PeriodicConfig c;
        c.group = Group::line();
        c.periods = {static_cast<int>(word.size())};
        c.sym = std::move(word);
        if (c.sym.empty()) throw input_error("empty period word");
        return c;
    }

    static PeriodicConfig grid_box(int d, std::vector<int> periods, std::vector<int> sym) {
        PeriodicConfig c;
        c.group = Group::grid(d);
        c.periods = std::move(periods);
        c.sym = std::move(sym);
        std::size_t n = 1;
        for (int p : c.periods) {
            if (p <= 0) throw input_error("grid period must be positive");
            n *= static_cast<std::size_t>(p);
        }
        if (n != c.sym.size()) throw input_error("fundamental domain size mismatch");
        return c;
    }

    static PeriodicConfig free_quotient(int k, int degree, std::vector<std::vector<int>> perms,
                                        std::vector<int> sym);

    std::size_t cell_count() const { return sym.size(); }

    int cell_index(const Elem& e) const {
        switch (group.kind()) {
            case GroupKind::Line: {
                int p = periods[0];
                int m = e.v[0] % p;
                if (m < 0) m += p;
                return m;
            }
            case GroupKind::Grid: {
                int idx = 0;
                for (int i = 0; i < group.rank(); ++i) {
                    int m = e.v[i] % periods[i];
                    if (m < 0) m += periods[i];
                    idx = idx * periods[i] + m;
                }
                return idx;
            }
            case GroupKind::Free: {
                int v = 0;
                for (int letter : e.v) {
                    int i = std::abs(letter) - 1;
                    if (letter > 0)
                        v = perms[i][v];
                    else {
                        // inverse permutation step
                        int u = 0;
                        while (perms[i][u] != v) ++u;
                        v = u;
                    }
                }
                return v;
            }
        }
        return 0;
    }

    int at(const Elem& e) const { return sym[static_cast<std::size_t>(cell_index(e))]; }
};

} // namespace symdyn
