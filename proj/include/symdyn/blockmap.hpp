#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "symdyn/sft.hpp"

namespace symdyn {

// Cell access during local-rule evaluation. get() returns the symbol on
// (track, cell) of the input, or kNeed when the cell is not determined yet;
// in that case the first such request is recorded so a search engine can
// branch on exactly the cells a rule actually reads.
inline constexpr int kNeed = -1;

class EvalCtx {
  public:
    virtual ~EvalCtx() = default;
    // NB: implementations must record the first failing request in needed().
    virtual int get(int track, const Elem& cell) = 0;

    bool has_need() const { return need_track_ >= 0; }
    int need_track() const { return need_track_; }
    const Elem& need_cell() const { return need_cell_; }
    void clear_need() { need_track_ = -1; }

  protected:
    void note_need(int track, const Elem& cell) {
        if (need_track_ < 0) {
            need_track_ = track;
            need_cell_ = cell;
        }
    }

  private:
    int need_track_ = -1;
    Elem need_cell_;
};

// Local rule: evaluates the output symbol at an absolute cell, reading inputs
// through the context. Returns kNeed if some required input is undetermined.
using Rule = std::function<int(EvalCtx&, const Elem&)>;

struct BlockMap;

// Serializable description of how a map was built (builtin name + parameters,
// an explicit table, or a composite). Used by the file-format layer.
struct MapDesc {
    std::string kind;
    std::map<std::string, std::string> params;
    std::vector<BlockMap> children;
    std::vector<int> table;
};

// Shift-commuting map given by a local rule on a finite neighborhood.
// Rules are intensional: builtins expose per-cell evaluation so exhaustive
// checks never materialize exponentially large tables.
struct BlockMap {
    Group group;
    Alphabet source;
    Alphabet target;
    Domain nbhd;
    Rule rule;
    std::shared_ptr<const MapDesc> desc;

    int eval(EvalCtx& ctx, const Elem& at) const { return rule(ctx, at); }
};

// Output domain is {a : aN inside dom(p)}; empty output is legal.
Pattern apply(const BlockMap& f, const Pattern& p);

// Applies over the fundamental domain; the result keeps the period data.
PeriodicConfig apply(const BlockMap& f, const PeriodicConfig& c);

// compose(g, f) applies f first.  Neighborhood is the Minkowski product.
BlockMap compose(const BlockMap& g, const BlockMap& f);

// Componentwise action on juxtaposed tracks; neighborhood is the union.
BlockMap product(const std::vector<BlockMap>& parts);

BlockMap identity_map(const Group& g, const Alphabet& a);
// Projection of a product alphabet onto tracks [begin, end).
BlockMap projection_map(const Group& g, const Alphabet& a, int track_begin, int track_end);
// Constant map to one symbol of the target alphabet.
BlockMap constant_map(const Group& g, const Alphabet& source, const Alphabet& target, int symbol);
// Dense rule table over the given neighborhood (cells in canonical order,
// source symbols mixed-radix, first neighborhood cell most significant).
BlockMap table_map(const Group& g, const Alphabet& source, const Alphabet& target, Domain nbhd,
                   std::vector<int> table);
// min / max of a single binary track over a window (dilation building blocks).
BlockMap min_map(const Group& g, Domain window);
BlockMap max_map(const Group& g, Domain window);
// Cellwise relabeling through `image` (size = source alphabet).
BlockMap relabel_map(const Group& g, const Alphabet& source, const Alphabet& target,
                     std::vector<int> image);

// Helpers shared by rule implementations.
inline int ctx_get(EvalCtx& ctx, int track, const Elem& cell) { return ctx.get(track, cell); }

} // namespace symdyn
