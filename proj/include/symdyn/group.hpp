#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symdyn/base.hpp"

namespace symdyn {

enum class GroupKind { Line, Grid, Free };

// Group element. Storage depends on the group kind:
//   Line     v = {n}
//   Grid(d)  v = d coordinates
//   Free(k)  v = freely reduced word, letters +i (generator a_i) / -i (its inverse), 1-based
struct Elem {
    std::vector<int> v;

    bool operator==(const Elem& o) const { return v == o.v; }
    bool operator!=(const Elem& o) const { return v != o.v; }
};

struct ElemHash {
    std::size_t operator()(const Elem& e) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ e.v.size();
        for (int x : e.v) h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(x)));
        return static_cast<std::size_t>(h);
    }
};

// A finitely generated group with its symmetric generating set: the line Z,
// the grid Z^d with +-e_i, or the free group F_k with k free generators.
// Supplies word metric, canonical element order, and ball enumeration.
class Group {
  public:
    Group() : kind_(GroupKind::Line), rank_(1) {}
    Group(GroupKind kind, int rank);

    static Group line() { return Group(GroupKind::Line, 1); }
    static Group grid(int d) { return Group(GroupKind::Grid, d); }
    static Group free_group(int k) { return Group(GroupKind::Free, k); }

    GroupKind kind() const { return kind_; }
    int rank() const { return rank_; }
    bool operator==(const Group& o) const { return kind_ == o.kind_ && rank_ == o.rank_; }
    bool operator!=(const Group& o) const { return !(*this == o); }

    Elem identity() const;
    bool is_identity(const Elem& e) const;
    // Symmetric generating set S, in canonical order. 1_G is never in S.
    std::vector<Elem> generators() const;

    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    // Word norm |a| with respect to the generating set (grid: l1).
    int norm(const Elem& a) const;
    int dist(const Elem& a, const Elem& b) const { return norm(mul(inv(a), b)); }

    // Canonical total order: line by integer; grid by (linf norm, coordinates);
    // free by (length, letters with a < a^-1 < b < b^-1 < ...).
    bool less(const Elem& a, const Elem& b) const;

    std::string show(const Elem& e) const;
    // Inverse of show(); rejects non-reduced free-group words.
    Elem parse(const std::string& s) const;

    void check_elem(const Elem& e) const;

  private:
    GroupKind kind_;
    int rank_;
};

// Finite subset of a group, deduplicated and kept in canonical order.
class Domain {
  public:
    Domain() = default;
    Domain(Group g, std::vector<Elem> cells);

    const Group& group() const { return group_; }
    const std::vector<Elem>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const Elem& operator[](std::size_t i) const { return cells_[i]; }

    bool contains(const Elem& e) const;
    // Index of e in canonical order, or -1.
    int index_of(const Elem& e) const;

    bool operator==(const Domain& o) const { return group_ == o.group_ && cells_ == o.cells_; }

    // aD
    Domain translated(const Elem& a) const;
    // Pointwise inverses.
    Domain inverse() const;
    // Minkowski product D*E = {d e}.
    Domain product(const Domain& e) const;
    // Interior D^{o r} = {a : a B_r subset D}.
    Domain interior(int r) const;
    Domain unioned(const Domain& e) const;
    Domain intersect(const Domain& e) const;
    Domain minus(const Domain& e) const;

    // Is the domain connected via right multiplication by S?
    bool connected() const;

  private:
    Group group_;
    std::vector<Elem> cells_;
};

// Radius-r word ball {a : |a| <= r}, canonically ordered.
Domain ball(const Group& g, int r);

// Line interval {lo, ..., hi}.
Domain interval(int lo, int hi);

inline Elem line_elem(int n) { return Elem{{n}}; }
inline Elem grid_elem(std::vector<int> coords) { return Elem{std::move(coords)}; }

} // namespace symdyn
