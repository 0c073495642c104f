#include "mdli/grid_domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mdli/coding.hpp"
#include "mdli/search.hpp"

namespace mdli {

namespace {

const GridSchema& gs() { return grid_schema(); }

// Fan-out bounds for parsing; declared configuration, not paper values.
constexpr int kBackgroundCands = 3;
constexpr int kLayerCandCap = 16;
constexpr int kComboCap = 256;
constexpr int kMaxPartsForUnions = 20;

struct LayerCand {
    NodePtr layer;             // ground Layer description
    std::vector<int> footprint;  // flat cell indices covered by the shape
    int covered = 0;             // footprint cells that were still uncovered
    int solidity = 1;            // 0 = fully visible solid object (topmost reading)
    int order = 0;               // deterministic enumeration key
};

// Object candidates for one layer slot, built from the maximal single-color
// parts of the still-uncovered cells. Occluded cells of a named mask may be
// completed when upper layers already explain them.
std::vector<LayerCand> layer_candidates(const Grid& g, const Bitmap& rem, Color bg,
                                        const Domain& dom, const NodePtr& layer_node) {
    Grid masked = g;
    for (int i = 0; i < g.h; ++i)
        for (int j = 0; j < g.w; ++j)
            if (!rem.at(i, j)) masked.set(i, j, bg.v);
    auto parts = segment_grid(masked, bg);

    struct Group {
        Color color;
        Vec pos, size;
        Bitmap bitmap;
        int order;
    };
    std::vector<Group> groups;
    for (size_t i = 0; i < parts.size(); ++i)
        groups.push_back({parts[i].color, parts[i].bbox_pos, parts[i].bbox_size,
                          parts[i].bbox_bitmap, int(i)});
    if (parts.size() <= kMaxPartsForUnions) {
        int order = int(parts.size());
        for (size_t i = 0; i < parts.size(); ++i)
            for (size_t j = i + 1; j < parts.size(); ++j) {
                if (!(parts[i].color == parts[j].color)) continue;
                Vec lo{std::min(parts[i].bbox_pos.i, parts[j].bbox_pos.i),
                       std::min(parts[i].bbox_pos.j, parts[j].bbox_pos.j)};
                Vec hi{std::max(parts[i].bbox_pos.i + parts[i].bbox_size.i,
                                parts[j].bbox_pos.i + parts[j].bbox_size.i),
                       std::max(parts[i].bbox_pos.j + parts[i].bbox_size.j,
                                parts[j].bbox_pos.j + parts[j].bbox_size.j)};
                Group u{parts[i].color, lo, {hi.i - lo.i, hi.j - lo.j},
                        Bitmap(hi.i - lo.i, hi.j - lo.j), order++};
                for (const auto* p : {&parts[i], &parts[j]})
                    for (Vec c : p->cells) u.bitmap.set(c.i - lo.i, c.j - lo.j, 1);
                groups.push_back(std::move(u));
            }
    }

    std::vector<LayerCand> cands;
    std::vector<uint64_t> seen;
    auto emit = [&](NodePtr layer, const Group& grp, const std::vector<int>& fp, int solidity) {
        if (!match_pattern(dom, layer_node, layer)) return;
        for (uint64_t h : seen)
            if (h == layer->hash) return;
        seen.push_back(layer->hash);
        int covered = 0;
        for (int c : fp) covered += rem.bits[size_t(c)] != 0;
        cands.push_back({std::move(layer), fp, covered, solidity, grp.order});
    };

    for (const auto& grp : groups) {
        NodePtr pos = gs().vec(grp.pos.i, grp.pos.j);
        NodePtr colv = gs().color(grp.color.v);
        // footprint of a full-size mask candidate: the whole spanned area
        auto mask_footprint = [&](MaskTag tag, const Bitmap* bmp) {
            std::vector<int> fp;
            for (int i = 0; i < grp.size.i; ++i)
                for (int j = 0; j < grp.size.j; ++j) {
                    auto m = mask_member(tag, bmp, grp.size, i, j);
                    if (m && *m) fp.push_back((grp.pos.i + i) * g.w + (grp.pos.j + j));
                }
            return fp;
        };
        if (grp.size.i == 1 && grp.size.j == 1)
            emit(gs().layer(pos, gs().colored(gs().point(), colv)), grp,
                 {grp.pos.i * g.w + grp.pos.j}, 0);
        // Cells of other parts inside this group's frame mean the scene reads
        // top-down as occlusion, not as a holed shape: such readings are kept
        // only as a fallback.
        auto holds_foreign = [&](auto mask_at) {
            for (int i = 0; i < grp.size.i; ++i)
                for (int j = 0; j < grp.size.j; ++j) {
                    if (mask_at(i, j) || grp.bitmap.at(i, j)) continue;
                    int gi = grp.pos.i + i, gj = grp.pos.j + j;
                    if (rem.at(gi, gj) && g.at(gi, gj) != bg.v) return true;
                }
            return false;
        };
        size_t before = cands.size();
        // named masks, allowing completion through occluded cells
        bool exact_named = false;
        const std::array<std::pair<CtorId, MaskTag>, 4> named = {
            std::make_pair(gs().cFull, MaskTag::Full),
            std::make_pair(gs().cBorder, MaskTag::Border),
            std::make_pair(gs().cEvenCheckboard, MaskTag::EvenCheckboard),
            std::make_pair(gs().cOddCheckboard, MaskTag::OddCheckboard)};
        for (auto [ctor, tag] : named) {
            bool valid = true, exact = true;
            for (int i = 0; i < grp.size.i && valid; ++i)
                for (int j = 0; j < grp.size.j && valid; ++j) {
                    auto m = mask_member(tag, nullptr, grp.size, i, j);
                    bool in_grp = grp.bitmap.at(i, j) != 0;
                    if (*m && !in_grp) {
                        // visible cells not of this group break the mask
                        if (rem.at(grp.pos.i + i, grp.pos.j + j)) valid = false;
                        exact = false;
                    } else if (!*m && in_grp) {
                        valid = false;
                    }
                }
            if (!valid) continue;
            if (tag != MaskTag::Full &&
                holds_foreign([&](int i, int j) { return *mask_member(tag, nullptr, grp.size, i, j); }))
                continue;
            exact_named |= exact;
            // a fully visible solid rectangle reads as the topmost object
            int solidity = (tag == MaskTag::Full && exact) ? 0 : 1;
            emit(gs().layer(pos, gs().colored(gs().rectangle(gs().vec(grp.size.i, grp.size.j),
                                                             gs().mask_named(ctor)),
                                              colv)),
                 grp, mask_footprint(tag, nullptr), solidity);
        }
        bool foreign_bitmap = holds_foreign([&](int i, int j) { return grp.bitmap.at(i, j) != 0; });
        if (!exact_named && (!foreign_bitmap || cands.size() == before)) {
            emit(gs().layer(pos, gs().colored(gs().rectangle(gs().vec(grp.size.i, grp.size.j),
                                                             gs().mask_bitmap(grp.bitmap)),
                                              colv)),
                 grp, mask_footprint(MaskTag::Bitmap, &grp.bitmap), foreign_bitmap ? 2 : 1);
        }
    }

    std::sort(cands.begin(), cands.end(), [](const LayerCand& a, const LayerCand& b) {
        if (a.solidity != b.solidity) return a.solidity < b.solidity;
        if (a.covered != b.covered) return a.covered > b.covered;
        return a.order < b.order;
    });
    if (int(cands.size()) > kLayerCandCap) cands.resize(kLayerCandCap);
    return cands;
}

struct GridParser {
    const Domain& dom;
    std::vector<NodePtr> out;

    // Enumerates ground candidates of `node` against grid g.
    void parse_node(const NodePtr& node, const Grid& g) {
        if (node->tag == Tag::Val) {
            out.push_back(node);
            return;
        }
        if (node->tag == Tag::Unknown) {
            // the literal description; structure comes from model refinements
            out.push_back(gs().raw_grid(g));
            return;
        }
        if (node->tag != Tag::Pat) return;
        if (node->ctor == gs().cLayers) parse_layers(node, g);
        if (node->ctor == gs().cTiling) parse_tiling(node, g);
    }

    NodePtr ground_size(const NodePtr& size_node, Vec observed) {
        if (size_node->is_ground()) return size_node;
        NodePtr cand = gs().vec(observed.i, observed.j);
        if (match_pattern(dom, size_node, cand)) return cand;
        return nullptr;
    }

    std::vector<NodePtr> ground_bg(const NodePtr& color_node, const Grid& g) {
        if (color_node->is_ground()) return {color_node};
        // most frequent colors first, at most kBackgroundCands
        std::array<int, kNumColors> counts{};
        for (uint8_t c : g.cells) counts[c % kNumColors]++;
        std::vector<int> order(kNumColors);
        for (int i = 0; i < kNumColors; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (counts[a] != counts[b]) return counts[a] > counts[b];
            return a < b;
        });
        std::vector<NodePtr> cands;
        for (int c : order) {
            if (counts[c] == 0 || int(cands.size()) >= kBackgroundCands) break;
            NodePtr cand = gs().color(c);
            if (match_pattern(dom, color_node, cand)) cands.push_back(cand);
        }
        return cands;
    }

    void parse_layers(const NodePtr& node, const Grid& g) {
        NodePtr size = ground_size(node->args[0], {g.h, g.w});
        if (!size) return;
        auto bgs = ground_bg(node->args[1], g);
        std::vector<NodePtr> layer_nodes(node->args.begin() + 2, node->args.end());
        for (const auto& bg : bgs) {
            auto bgc = gs().as_color(bg);
            if (!bgc) continue;
            Bitmap rem(g.h, g.w, 1);
            std::vector<NodePtr> acc;
            dfs_layers(node, g, size, bg, *bgc, layer_nodes, 0, rem, acc);
        }
    }

    void dfs_layers(const NodePtr& node, const Grid& g, const NodePtr& size, const NodePtr& bg,
                    Color bgc, const std::vector<NodePtr>& layer_nodes, size_t slot, Bitmap& rem,
                    std::vector<NodePtr>& acc) {
        if (int(out.size()) >= kComboCap) return;
        if (slot == layer_nodes.size()) {
            std::vector<NodePtr> args{size, bg};
            for (const auto& l : acc) args.push_back(l);
            out.push_back(make_pat(gs().schema, gs().cLayers, std::move(args)));
            return;
        }
        if (layer_nodes[slot]->is_ground()) {
            // fixed layer: consume its footprint without search
            auto cells = shape_cells(gs(), layer_nodes[slot]->args[1]->args[0]);
            auto pos = gs().as_vec(layer_nodes[slot]->args[0]);
            Bitmap saved = rem;
            if (cells && pos) {
                for (Vec rel : cells->second) {
                    int i = pos->i + rel.i, j = pos->j + rel.j;
                    if (g.in_bounds(i, j)) rem.set(i, j, 0);
                }
            }
            acc.push_back(layer_nodes[slot]);
            dfs_layers(node, g, size, bg, bgc, layer_nodes, slot + 1, rem, acc);
            acc.pop_back();
            rem = saved;
            return;
        }
        auto cands = layer_candidates(g, rem, bgc, dom, layer_nodes[slot]);
        for (const auto& cand : cands) {
            if (int(out.size()) >= kComboCap) return;
            Bitmap saved = rem;
            for (int c : cand.footprint) rem.bits[size_t(c)] = 0;
            acc.push_back(cand.layer);
            dfs_layers(node, g, size, bg, bgc, layer_nodes, slot + 1, rem, acc);
            acc.pop_back();
            rem = saved;
        }
    }

    void parse_tiling(const NodePtr& node, const Grid& g) {
        NodePtr size = ground_size(node->args[1], {g.h, g.w});
        if (!size) return;
        // exact periodic covers only
        std::vector<Vec> periods;
        for (int ph = 1; ph <= g.h; ++ph) {
            if (g.h % ph) continue;
            for (int pw = 1; pw <= g.w; ++pw) {
                if (g.w % pw) continue;
                if (ph == g.h && pw == g.w) continue;
                bool ok = true;
                for (int i = 0; i < g.h && ok; ++i)
                    for (int j = 0; j < g.w && ok; ++j)
                        ok = g.at(i, j) == g.at(i % ph, j % pw);
                if (ok) periods.push_back({ph, pw});
            }
        }
        std::sort(periods.begin(), periods.end(), [](Vec a, Vec b) {
            if (a.i * a.j != b.i * b.j) return a.i * a.j < b.i * b.j;
            return a < b;
        });
        for (Vec p : periods) {
            Grid inner(p.i, p.j);
            for (int i = 0; i < p.i; ++i)
                for (int j = 0; j < p.j; ++j) inner.set(i, j, g.at(i, j));
            GridParser sub{dom, {}};
            sub.parse_node(node->args[0], inner);
            for (const auto& d : sub.out) {
                if (int(out.size()) >= kComboCap) return;
                out.push_back(make_pat(gs().schema, gs().cTiling, {d, size}));
            }
        }
    }
};

} // namespace

Bits GridDomain::value_dl(const Value& v, KindId kind) const {
    (void)kind;
    switch (v.index()) {
        case 0: {
            int n = std::get<int>(v);
            return n >= 0 ? universal_int(n + 1) : universal_int(1 - long(n)) + 1;
        }
        case 1: return std::log2(double(kNumColors));
        case 2: {
            const auto& b = std::get<Bitmap>(v);
            return universal_int(b.h + 1) + universal_int(b.w + 1) + double(b.h) * b.w;
        }
        case 3: {
            const auto& g = std::get<Grid>(v);
            return universal_int(g.h + 1) + universal_int(g.w + 1) +
                   double(g.h) * g.w * std::log2(double(kNumColors));
        }
        default: return kInfiniteDL;
    }
}

std::vector<ParseResult> GridDomain::parse(const NodePtr& model, const NodePtr& env,
                                           const Datum& datum, int limit) const {
    std::vector<ParseResult> results;
    if (!std::holds_alternative<Grid>(datum)) return results;
    const Grid& g = std::get<Grid>(datum);
    auto reduced = resolve(*this, model, env);
    if (!reduced) return results;

    GridParser parser{*this, {}};
    parser.parse_node(*reduced, g);

    Coder coder(*this);
    struct Scored {
        NodePtr desc;
        Bits dl;
        int order;
    };
    std::vector<Scored> scored;
    std::vector<uint64_t> seen;
    for (size_t i = 0; i < parser.out.size(); ++i) {
        const auto& desc = parser.out[i];
        bool dup = false;
        for (uint64_t h : seen)
            if (h == desc->hash) dup = true;
        if (dup) continue;
        seen.push_back(desc->hash);
        auto ddl = coder.description_dl(desc, *reduced);
        if (!ddl) continue;
        Bits res = residual_dl(datum, desc);
        if (res >= kInfiniteDL) continue;
        scored.push_back({desc, *ddl + res, int(i)});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.dl != b.dl) return a.dl < b.dl;
        return a.order < b.order;
    });
    if (int(scored.size()) > limit) scored.resize(size_t(limit));
    for (size_t i = 0; i < scored.size(); ++i)
        results.push_back({int(i) + 1, scored[i].desc, scored[i].dl});
    return results;
}

Result<Datum> GridDomain::render_datum(const NodePtr& desc) const {
    auto r = render(desc);
    if (!r) return Result<Datum>::fail(r.error);
    return Result<Datum>::ok(Datum{r->grid});
}

Bits GridDomain::residual_dl(const Datum& datum, const NodePtr& desc) const {
    if (!std::holds_alternative<Grid>(datum)) return kInfiniteDL;
    const Grid& g = std::get<Grid>(datum);
    auto r = render(desc);
    if (!r) return kInfiniteDL;
    auto diff = grid_diff(g, desc);
    if (!diff) return kInfiniteDL;
    // clipped object cells count as deltas, keeping DL pressure against
    // overflowing models
    long d = long(diff->size()) + r->clipped;
    if (d == 0) return 0.0;
    double extent = double(std::max(g.h, r->grid.h)) * double(std::max(g.w, r->grid.w));
    return universal_int(d + 1) - universal_int(1) +
           double(d) * (std::log2(extent) + std::log2(double(kNumColors)));
}

namespace {

NodePtr render_object_grid(const NodePtr& object) {
    auto cells = shape_cells(gs(), object->args[0]);
    auto col = gs().as_color(object->args[1]);
    if (!cells || !col) return nullptr;
    Grid g(cells->first.i, cells->first.j, 0);
    for (Vec c : cells->second) g.set(c.i, c.j, col->v);
    return gs().raw_grid(std::move(g));
}

// Deterministic grounding candidates per unknown kind; the first entry is
// the generation default.
std::vector<NodePtr> ground_candidates(KindId kind) {
    const auto& G = gs();
    std::vector<NodePtr> c;
    if (kind == G.kInt) {
        for (int n : {1, 0, 2, 3, 4, 5}) c.push_back(make_val(G.kInt, n));
    } else if (kind == G.kColor) {
        for (int n = 0; n < kNumColors; ++n) c.push_back(G.color(n));
    } else if (kind == G.kVector) {
        for (auto [i, j] : {std::pair{1, 1}, {2, 2}, {1, 2}, {2, 1}, {3, 3}})
            c.push_back(G.vec(i, j));
    } else if (kind == G.kMask) {
        for (CtorId m : {G.cFull, G.cBorder, G.cEvenCheckboard, G.cOddCheckboard})
            c.push_back(G.mask_named(m));
    } else if (kind == G.kGrid || kind == G.kRawGrid) {
        c.push_back(G.raw_grid(Grid(1, 1, 0)));
    } else if (kind == G.kShape) {
        c.push_back(G.point());
    } else if (kind == G.kObject) {
        c.push_back(G.colored(G.point(), G.color(0)));
    } else if (kind == G.kLayer) {
        c.push_back(G.layer(G.vec(0, 0), G.colored(G.point(), G.color(0))));
    } else if (kind == G.kBitmap) {
        c.push_back(make_val(G.kBitmap, Bitmap(1, 1, 1)));
    }
    return c;
}

NodePtr random_ground(KindId kind, const Path& at, Rng& rng) {
    const auto& G = gs();
    if (kind == G.kInt) return make_val(G.kInt, rng.range(1, 5));
    if (kind == G.kColor) return G.color(rng.range(0, kNumColors - 1));
    if (kind == G.kVector) {
        bool root_size = at.size() == 1 && at[0].field == "size";
        bool is_pos = !at.empty() && at.back().field == "pos";
        // positions cluster so that created layers tend to overlap
        if (root_size) return G.vec(rng.range(9, 12), rng.range(9, 12));
        if (is_pos) return G.vec(rng.range(0, 3), rng.range(0, 3));
        return G.vec(rng.range(3, 5), rng.range(3, 5));
    }
    if (kind == G.kMask) {
        CtorId masks[4] = {G.cFull, G.cBorder, G.cEvenCheckboard, G.cOddCheckboard};
        return G.mask_named(masks[rng.below(4)]);
    }
    auto defaults = ground_candidates(kind);
    return defaults.empty() ? nullptr : defaults[0];
}

} // namespace

std::vector<GenResult> GridDomain::generate(const NodePtr& model, const NodePtr& env, int limit,
                                            Rng* rng) const {
    std::vector<GenResult> results;
    auto reduced = resolve(*this, model, env);
    if (!reduced) return results;

    struct Slot {
        Path path;
        KindId kind;
    };
    std::vector<Slot> slots;
    Path prefix;
    walk_model(schema(), *reduced, prefix, [&](const Path& p, const NodePtr& n) {
        if (n->tag == Tag::Unknown) slots.push_back({p, n->kind});
    });

    auto emit = [&](const NodePtr& desc) {
        auto r = render(desc);
        if (!r) return;
        results.push_back({int(results.size()) + 1, desc, Datum{r->grid}});
    };

    if (slots.empty()) {
        emit(*reduced);
        return results;
    }

    if (rng) {
        for (int k = 0; k < limit; ++k) {
            NodePtr cur = *reduced;
            bool ok = true;
            for (const auto& slot : slots) {
                NodePtr v = random_ground(slot.kind, slot.path, *rng);
                if (!v) {
                    ok = false;
                    break;
                }
                auto r = replace_at(schema(), cur, slot.path, [&](const NodePtr&) { return v; });
                if (!r) {
                    ok = false;
                    break;
                }
                cur = *r;
            }
            if (ok) emit(cur);
        }
        return results;
    }

    // deterministic: defaults first, then vary slots odometer-style
    std::vector<std::vector<NodePtr>> cands;
    for (const auto& slot : slots) {
        auto c = ground_candidates(slot.kind);
        if (c.empty()) return results;
        cands.push_back(std::move(c));
    }
    std::vector<size_t> idx(slots.size(), 0);
    while (int(results.size()) < limit) {
        NodePtr cur = *reduced;
        bool ok = true;
        for (size_t s = 0; s < slots.size() && ok; ++s) {
            auto r = replace_at(schema(), cur, slots[s].path,
                                [&](const NodePtr&) { return cands[s][idx[s]]; });
            if (!r)
                ok = false;
            else
                cur = *r;
        }
        if (ok) emit(cur);
        // advance odometer, last slot fastest
        size_t s = slots.size();
        while (s > 0) {
            --s;
            if (++idx[s] < cands[s].size()) break;
            idx[s] = 0;
            if (s == 0) return results;
        }
        if (s == 0 && idx[0] == 0) break;
    }
    return results;
}

Result<NodePtr> GridDomain::implicit_component(const NodePtr& desc, const std::string& field) const {
    const auto& G = gs();
    if (field == "grid") {
        if (desc->kind == G.kRawGrid) return Result<NodePtr>::ok(desc);
        if (desc->kind == G.kGrid) {
            auto r = render(desc);
            if (!r) return Result<NodePtr>::fail(r.error);
            return Result<NodePtr>::ok(G.raw_grid(r->grid));
        }
        if (desc->kind == G.kObject && desc->tag == Tag::Pat) {
            NodePtr g = render_object_grid(desc);
            if (g) return Result<NodePtr>::ok(g);
        }
        return Result<NodePtr>::fail("path not found: grid");
    }
    if (field == "size") {
        if (desc->kind == G.kRawGrid && desc->tag == Tag::Val) {
            const Grid& g = std::get<Grid>(desc->val);
            return Result<NodePtr>::ok(G.vec(g.h, g.w));
        }
        if (desc->tag == Tag::Pat && desc->ctor == G.cPoint)
            return Result<NodePtr>::ok(G.vec(1, 1));
        if (desc->kind == G.kObject && desc->tag == Tag::Pat) {
            auto cells = shape_cells(G, desc->args[0]);
            if (cells) return Result<NodePtr>::ok(G.vec(cells->first.i, cells->first.j));
        }
        return Result<NodePtr>::fail("path not found: size");
    }
    return Result<NodePtr>::fail("path not found: " + field);
}

void GridDomain::implicit_signature(const NodePtr& model_node, bool,
                                    std::vector<std::pair<std::string, KindId>>& out) const {
    const auto& G = gs();
    if (model_node->kind == G.kGrid || model_node->kind == G.kRawGrid) {
        out.push_back({"grid", G.kRawGrid});
        if (model_node->tag == Tag::Unknown || model_node->tag == Tag::Val)
            out.push_back({"size", G.kVector});
    } else if (model_node->kind == G.kObject) {
        out.push_back({"grid", G.kRawGrid});
        out.push_back({"size", G.kVector});
    } else if (model_node->tag == Tag::Pat && model_node->ctor == G.cPoint) {
        out.push_back({"size", G.kVector});
    }
}

bool GridDomain::unknown_allowed(KindId kind) const {
    const auto& G = gs();
    return kind == G.kInt || kind == G.kColor || kind == G.kVector || kind == G.kMask;
}

std::string GridDomain::datum_to_text(const Datum& d) const {
    if (!std::holds_alternative<Grid>(d)) return "";
    return grid_ascii(std::get<Grid>(d));
}

namespace {

// True when every example has a kept description whose component at `path`
// satisfies `pred`.
template <class Pred>
bool all_examples_have(const RefineCtx& ctx, Side side, const Path& path, Pred pred) {
    for (const auto& ej : ctx.joints) {
        bool found = false;
        for (const auto& j : ej.kept) {
            const NodePtr& root = side == Side::Input ? j.desc_in : j.desc_out;
            auto sub = lookup(ctx.domain, root, path);
            if (sub && pred(*sub)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return !ctx.joints.empty();
}

bool has_smaller_period(const Grid& g) {
    for (int ph = 1; ph <= g.h; ++ph) {
        if (g.h % ph) continue;
        for (int pw = 1; pw <= g.w; ++pw) {
            if (g.w % pw) continue;
            if (ph == g.h && pw == g.w) continue;
            bool ok = true;
            for (int i = 0; i < g.h && ok; ++i)
                for (int j = 0; j < g.w && ok; ++j) ok = g.at(i, j) == g.at(i % ph, j % pw);
            if (ok) return true;
        }
    }
    return false;
}

} // namespace

void GridDomain::propose_refinements(const RefineCtx& ctx, std::vector<Refinement>& out) const {
    const auto& G = gs();
    NodePrinter pr = printer();

    auto add = [&](Refinement r) {
        std::string target = std::string(side_name(r.side));
        if (!r.path.empty()) target += "." + path_to_string(r.path);
        if (r.op == Refinement::Op::InsertElem)
            target += ".lay[" + std::to_string(r.pos) + "]";
        r.label = target + " <- " + pr(r.node);
        out.push_back(std::move(r));
    };

    // data-side savings proxy for layer insertions: the biggest same-color
    // cluster of cells the current descriptions leave unexplained
    auto insert_hint = [&](Side side) -> Bits {
        Bits hint = 0;
        for (size_t e = 0; e < ctx.joints.size(); ++e) {
            if (ctx.joints[e].kept.empty()) continue;
            const auto& j = ctx.joints[e].kept[0];
            const NodePtr& desc = side == Side::Input ? j.desc_in : j.desc_out;
            const Datum& datum = side == Side::Input ? ctx.train[e].input : ctx.train[e].output;
            if (!std::holds_alternative<Grid>(datum)) continue;
            const Grid& g = std::get<Grid>(datum);
            auto diff = grid_diff(g, desc);
            if (!diff) continue;
            std::array<int, kNumColors> byc{};
            for (const auto& cd : *diff)
                if (g.in_bounds(cd.pos.i, cd.pos.j)) byc[cd.color.v]++;
            int s = *std::max_element(byc.begin(), byc.end());
            double per_cell = std::log2(double(g.h) * g.w) + std::log2(double(kNumColors));
            hint += ctx.cfg.alpha * std::max(0.0, s * per_cell - 18.0);
        }
        return hint;
    };

    for (Side side : {Side::Input, Side::Output}) {
        const Bits side_hint = insert_hint(side);
        const NodePtr& root = side == Side::Input ? ctx.model.input : ctx.model.output;
        Path prefix;
        walk_model(schema(), root, prefix, [&](const Path& p, const NodePtr& n) {
            // grid-structure patterns at grid holes; literal parses carry no
            // constructor evidence, so these come from a catalog
            if (n->tag == Tag::Unknown && n->kind == G.kGrid) {
                add({Refinement::Op::Replace, side, p,
                     G.layers(make_unknown(G.kVector), make_unknown(G.kColor), {}), 0, false, ""});
                bool periodic = all_examples_have(ctx, side, p, [&](const NodePtr& d) {
                    return d->tag == Tag::Val && std::holds_alternative<Grid>(d->val) &&
                           has_smaller_period(std::get<Grid>(d->val));
                });
                if (periodic)
                    add({Refinement::Op::Replace, side, p,
                         G.tiling(make_unknown(G.kGrid), make_unknown(G.kVector)), 0, false, ""});
            }
            // layer insertions into every layer list
            if (n->tag == Tag::Pat && n->ctor == G.cLayers) {
                int len = n->list_len(schema());
                std::vector<NodePtr> templates = {
                    G.layer(make_unknown(G.kVector), G.colored(G.point(), make_unknown(G.kColor))),
                    G.layer(make_unknown(G.kVector),
                            G.colored(G.rectangle(make_unknown(G.kVector), make_unknown(G.kMask)),
                                      make_unknown(G.kColor))),
                };
                if (side == Side::Output) {
                    // referenced objects and whole referenced layers
                    std::vector<std::pair<Path, KindId>> cands;
                    if (!ctx.joints.empty() && !ctx.joints[0].kept.empty()) {
                        auto comps = components_of(ctx.domain, ctx.joints[0].kept[0].desc_in);
                        for (const auto& c : comps.comps) {
                            if (c.desc->kind != G.kObject && c.desc->kind != G.kLayer) continue;
                            if (cands.size() >= 8) break;
                            cands.push_back({c.path, c.desc->kind});
                        }
                    }
                    for (auto& [path, kind] : cands) {
                        bool everywhere =
                            all_examples_have(ctx, Side::Input, path, [&](const NodePtr& d) {
                                return d->kind == kind;
                            });
                        if (!everywhere) continue;
                        if (kind == G.kObject)
                            templates.push_back(
                                G.layer(make_unknown(G.kVector), make_ref(G.kObject, path)));
                        else
                            templates.push_back(make_ref(G.kLayer, path));
                    }
                }
                for (const auto& tpl : templates) {
                    add({Refinement::Op::InsertElem, side, p, tpl, 0, false, "", side_hint});
                    if (len > 0)
                        add({Refinement::Op::InsertElem, side, p, tpl, len, false, "", side_hint});
                }
            }
        });
    }
}

std::vector<NodePtr> GridDomain::expression_const_args(const RefineCtx&) const {
    // small factors for products, divisions and scalings
    return {make_val(gs().kInt, 2), make_val(gs().kInt, 3)};
}

const Domain& get_grid_domain() {
    static GridDomain d;
    return d;
}

} // namespace mdli
