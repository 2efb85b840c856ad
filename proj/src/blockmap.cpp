#include "symdyn/blockmap.hpp"

#include <algorithm>

namespace symdyn {

namespace {

class PatternCtx : public EvalCtx {
  public:
    PatternCtx(const Pattern& p, const Alphabet& a) : p_(p), a_(a) {}
    int get(int track, const Elem& cell) override {
        int i = p_.dom.index_of(cell);
        if (i < 0) {
            note_need(track, cell);
            return kNeed;
        }
        return a_.track_of(p_.sym[static_cast<std::size_t>(i)], track);
    }

  private:
    const Pattern& p_;
    const Alphabet& a_;
};

class PeriodicCtx : public EvalCtx {
  public:
    PeriodicCtx(const PeriodicConfig& c, const Alphabet& a) : c_(c), a_(a) {}
    int get(int track, const Elem& cell) override {
        return a_.track_of(c_.at(cell), track);
    }

  private:
    const PeriodicConfig& c_;
    const Alphabet& a_;
};

} // namespace

Pattern apply(const BlockMap& f, const Pattern& p) {
    const Group& g = f.group;
    // output cells: a with a*N inside dom(p)
    std::vector<Elem> out_cells;
    Domain candidates = p.dom.product(f.nbhd.inverse());
    for (const Elem& a : candidates.cells()) {
        bool inside = true;
        for (const Elem& n : f.nbhd.cells())
            if (!p.dom.contains(g.mul(a, n))) {
                inside = false;
                break;
            }
        if (inside) out_cells.push_back(a);
    }
    Domain out_dom(g, std::move(out_cells));
    std::vector<int> out_sym(out_dom.size());
    PatternCtx ctx(p, f.source);
    for (std::size_t i = 0; i < out_dom.size(); ++i) {
        int v = f.eval(ctx, out_dom[i]);
        if (v == kNeed) throw input_error("rule read outside the pattern domain");
        out_sym[i] = v;
    }
    return Pattern(std::move(out_dom), std::move(out_sym));
}

PeriodicConfig apply(const BlockMap& f, const PeriodicConfig& c) {
    PeriodicConfig out = c;
    PeriodicCtx ctx(c, f.source);
    const Group& g = f.group;
    switch (g.kind()) {
        case GroupKind::Line: {
            for (int i = 0; i < c.periods[0]; ++i)
                out.sym[static_cast<std::size_t>(i)] = f.eval(ctx, line_elem(i));
            break;
        }
        case GroupKind::Grid: {
            std::vector<int> v(g.rank(), 0);
            std::function<void(int)> rec = [&](int dim) {
                if (dim == g.rank()) {
                    Elem a{v};
                    out.sym[static_cast<std::size_t>(c.cell_index(a))] = f.eval(ctx, a);
                    return;
                }
                for (v[dim] = 0; v[dim] < c.periods[dim]; ++v[dim]) rec(dim + 1);
                v[dim] = 0;
            };
            rec(0);
            break;
        }
        case GroupKind::Free: {
            // evaluate the rule once per quotient vertex: walk offsets through the quotient
            for (int v0 = 0; v0 < c.degree; ++v0) {
                struct QuotientCtx : EvalCtx {
                    const PeriodicConfig& c;
                    const Alphabet& a;
                    int base;
                    QuotientCtx(const PeriodicConfig& c, const Alphabet& a, int base)
                        : c(c), a(a), base(base) {}
                    int get(int track, const Elem& cell) override {
                        int v = base;
                        for (int letter : cell.v) {
                            int i = std::abs(letter) - 1;
                            if (letter > 0)
                                v = c.perms[i][v];
                            else {
                                int u = 0;
                                while (c.perms[i][u] != v) ++u;
                                v = u;
                            }
                        }
                        return a.track_of(c.sym[static_cast<std::size_t>(v)], track);
                    }
                } qctx(c, f.source, v0);
                out.sym[static_cast<std::size_t>(v0)] = f.eval(qctx, g.identity());
            }
            break;
        }
    }
    return out;
}

namespace {

// View the output of an inner map as the input tracks of an outer rule.
class ComposedCtx : public EvalCtx {
  public:
    ComposedCtx(EvalCtx& base, const BlockMap& inner) : base_(base), inner_(inner) {}
    int get(int track, const Elem& cell) override {
        int v = inner_.eval(base_, cell);
        if (v == kNeed) {
            note_need(track, cell);
            return kNeed;
        }
        return inner_.target.track_of(v, track);
    }

  private:
    EvalCtx& base_;
    const BlockMap& inner_;
};

// Shift the track indices seen by a component of a product.
class TrackOffsetCtx : public EvalCtx {
  public:
    TrackOffsetCtx(EvalCtx& base, int offset) : base_(base), offset_(offset) {}
    int get(int track, const Elem& cell) override {
        int v = base_.get(track + offset_, cell);
        if (v == kNeed) note_need(track, cell);
        return v;
    }

  private:
    EvalCtx& base_;
    int offset_;
};

} // namespace

BlockMap compose(const BlockMap& g, const BlockMap& f) {
    if (f.target != g.source) throw input_error("compose: alphabet mismatch");
    if (f.group != g.group) throw input_error("compose: group mismatch");
    BlockMap out;
    out.group = f.group;
    out.source = f.source;
    out.target = g.target;
    out.nbhd = g.nbhd.product(f.nbhd);
    BlockMap gc = g, fc = f;
    out.rule = [gc, fc](EvalCtx& ctx, const Elem& at) -> int {
        // needs surface in the base ctx at the inner map's raw input cells
        ComposedCtx cctx(ctx, fc);
        return gc.eval(cctx, at);
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "compose";
    d->children = {g, f};
    out.desc = d;
    return out;
}

BlockMap product(const std::vector<BlockMap>& parts) {
    if (parts.empty()) throw input_error("product of zero maps");
    BlockMap out;
    out.group = parts[0].group;
    std::vector<Alphabet> srcs, tgts;
    Domain nb = parts[0].nbhd;
    for (const auto& p : parts) {
        if (p.group != out.group) throw input_error("product: group mismatch");
        srcs.push_back(p.source);
        tgts.push_back(p.target);
        nb = nb.unioned(p.nbhd);
    }
    out.source = Alphabet::product(srcs);
    out.target = Alphabet::product(tgts);
    out.nbhd = nb;
    std::vector<int> src_offsets, tgt_sizes;
    int off = 0;
    for (const auto& p : parts) {
        src_offsets.push_back(off);
        off += p.source.num_tracks();
        tgt_sizes.push_back(p.target.size());
    }
    std::vector<BlockMap> comps = parts;
    Alphabet target = out.target;
    out.rule = [comps, src_offsets, target](EvalCtx& ctx, const Elem& at) -> int {
        std::vector<int> vals;
        vals.reserve(target.num_tracks());
        for (std::size_t i = 0; i < comps.size(); ++i) {
            TrackOffsetCtx octx(ctx, src_offsets[i]);
            int v = comps[i].eval(octx, at);
            if (v == kNeed) return kNeed;
            for (int t = 0; t < comps[i].target.num_tracks(); ++t)
                vals.push_back(comps[i].target.track_of(v, t));
        }
        return target.flatten(vals);
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "product";
    d->children = parts;
    out.desc = d;
    return out;
}

BlockMap identity_map(const Group& g, const Alphabet& a) {
    return projection_map(g, a, 0, a.num_tracks());
}

BlockMap projection_map(const Group& g, const Alphabet& a, int track_begin, int track_end) {
    BlockMap out;
    out.group = g;
    out.source = a;
    std::vector<std::vector<std::string>> tr(a.tracks.begin() + track_begin,
                                             a.tracks.begin() + track_end);
    Alphabet target;
    target.tracks = tr;
    out.target = target;
    out.nbhd = Domain(g, {g.identity()});
    out.rule = [target, track_begin, track_end](EvalCtx& ctx, const Elem& at) -> int {
        std::vector<int> vals;
        for (int t = track_begin; t < track_end; ++t) {
            int v = ctx.get(t, at);
            if (v == kNeed) return kNeed;
            vals.push_back(v);
        }
        return target.flatten(vals);
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "projection";
    d->params["begin"] = std::to_string(track_begin);
    d->params["end"] = std::to_string(track_end);
    out.desc = d;
    return out;
}

BlockMap constant_map(const Group& g, const Alphabet& source, const Alphabet& target, int symbol) {
    BlockMap out;
    out.group = g;
    out.source = source;
    out.target = target;
    out.nbhd = Domain(g, {g.identity()});
    out.rule = [symbol](EvalCtx&, const Elem&) -> int { return symbol; };
    auto d = std::make_shared<MapDesc>();
    d->kind = "constant";
    d->params["symbol"] = std::to_string(symbol);
    out.desc = d;
    return out;
}

BlockMap table_map(const Group& g, const Alphabet& source, const Alphabet& target, Domain nbhd,
                   std::vector<int> table) {
    std::size_t want = 1;
    for (std::size_t i = 0; i < nbhd.size(); ++i) want *= static_cast<std::size_t>(source.size());
    if (table.size() != want) throw input_error("rule table size mismatch");
    for (int v : table)
        if (v < 0 || v >= target.size()) throw input_error("rule table symbol out of range");
    BlockMap out;
    out.group = g;
    out.source = source;
    out.target = target;
    out.nbhd = nbhd;
    int ssize = source.size();
    int ntracks = source.num_tracks();
    Domain nb = out.nbhd;
    Alphabet src = source;
    auto tbl = std::make_shared<std::vector<int>>(std::move(table));
    out.rule = [nb, src, ssize, ntracks, tbl, g](EvalCtx& ctx, const Elem& at) -> int {
        long long idx = 0;
        for (const Elem& n : nb.cells()) {
            Elem cell = g.mul(at, n);
            std::vector<int> parts(ntracks);
            for (int t = 0; t < ntracks; ++t) {
                int v = ctx.get(t, cell);
                if (v == kNeed) return kNeed;
                parts[t] = v;
            }
            idx = idx * ssize + src.flatten(parts);
        }
        return (*tbl)[static_cast<std::size_t>(idx)];
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "table";
    d->table = *tbl;
    out.desc = d;
    return out;
}

namespace {

BlockMap extremum_map(const Group& g, Domain window, bool is_min) {
    BlockMap out;
    out.group = g;
    out.source = Alphabet::binary();
    out.target = Alphabet::binary();
    out.nbhd = window;
    Domain w = out.nbhd;
    int absorb = is_min ? 0 : 1;
    out.rule = [w, g, absorb](EvalCtx& ctx, const Elem& at) -> int {
        bool missing = false;
        for (const Elem& n : w.cells()) {
            int v = ctx.get(0, g.mul(at, n));
            if (v == kNeed)
                missing = true;
            else if (v == absorb)
                return absorb; // determined regardless of unread cells
        }
        return missing ? kNeed : 1 - absorb;
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = is_min ? "min" : "max";
    out.desc = d;
    return out;
}

} // namespace

BlockMap min_map(const Group& g, Domain window) { return extremum_map(g, std::move(window), true); }
BlockMap max_map(const Group& g, Domain window) { return extremum_map(g, std::move(window), false); }

BlockMap relabel_map(const Group& g, const Alphabet& source, const Alphabet& target,
                     std::vector<int> image) {
    if (static_cast<int>(image.size()) != source.size())
        throw input_error("relabel image size mismatch");
    BlockMap out;
    out.group = g;
    out.source = source;
    out.target = target;
    out.nbhd = Domain(g, {g.identity()});
    int ntracks = source.num_tracks();
    Alphabet src = source;
    auto img = std::make_shared<std::vector<int>>(std::move(image));
    out.rule = [ntracks, src, img](EvalCtx& ctx, const Elem& at) -> int {
        std::vector<int> parts(ntracks);
        for (int t = 0; t < ntracks; ++t) {
            int v = ctx.get(t, at);
            if (v == kNeed) return kNeed;
            parts[t] = v;
        }
        return (*img)[static_cast<std::size_t>(src.flatten(parts))];
    };
    auto d = std::make_shared<MapDesc>();
    d->kind = "relabel";
    out.desc = d;
    return out;
}

} // namespace symdyn
