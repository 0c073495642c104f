#include <doctest.h>

#include "helpers.hpp"

using namespace mdli;
using namespace mdli::test;

namespace {
const GridSchema& G = grid_schema();
}

TEST_CASE("segment_grid basics") {
    SUBCASE("single cell") {
        Grid g = make_grid({"3"});
        auto parts = segment_grid(g, std::nullopt);
        REQUIRE(parts.size() == 1);
        CHECK(parts[0].color.v == 3);
        CHECK(parts[0].cells == std::vector<Vec>{{0, 0}});
    }
    SUBCASE("running task first input") {
        Task t = load_fixture("arc/b94a9452.json");
        const Grid& g = std::get<Grid>(t.train[0].input);
        auto parts = segment_grid(g, Color{0});
        REQUIRE(parts.size() == 2);
        // parts in scan order: the red ring starts at (1,3), yellow at (2,4)
        CHECK(parts[0].color.v == 2);
        CHECK(parts[0].bbox_pos == Vec{1, 3});
        CHECK(parts[0].bbox_size == Vec{4, 4});
        CHECK(parts[1].color.v == 4);
        CHECK(parts[1].bbox_pos == Vec{2, 4});
        CHECK(parts[1].bbox_size == Vec{2, 2});
        // the yellow square sits inside the red bounding box
        CHECK(parts[1].bbox_pos.i >= parts[0].bbox_pos.i);
        CHECK(parts[1].bbox_pos.j >= parts[0].bbox_pos.j);
    }
    SUBCASE("uniform grid is all background") {
        Grid g(5, 5, 7);
        CHECK(segment_grid(g, Color{7}).empty());
    }
}

TEST_CASE("segment_grid properties: disjoint, connected, re-merge") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        int h = rng.range(1, 8), w = rng.range(1, 8);
        Grid g(h, w);
        for (auto& c : g.cells) c = uint8_t(rng.below(4));
        std::optional<Color> bg;
        if (trial % 2 == 0) bg = Color{0};
        auto parts = segment_grid(g, bg);
        Grid merged(h, w, bg ? bg->v : 255);
        for (const auto& p : parts) {
            for (Vec c : p.cells) {
                CHECK(merged.at(c.i, c.j) == (bg ? bg->v : 255));  // disjoint
                merged.set(c.i, c.j, p.color.v);
            }
            // connectivity under 4-adjacency
            std::vector<Vec> frontier{p.cells.front()};
            std::vector<Vec> seen{p.cells.front()};
            while (!frontier.empty()) {
                Vec q = frontier.back();
                frontier.pop_back();
                const Vec nb[4] = {{q.i - 1, q.j}, {q.i + 1, q.j}, {q.i, q.j - 1}, {q.i, q.j + 1}};
                for (Vec r : nb) {
                    bool in_part = std::find(p.cells.begin(), p.cells.end(), r) != p.cells.end();
                    bool visited = std::find(seen.begin(), seen.end(), r) != seen.end();
                    if (in_part && !visited) {
                        seen.push_back(r);
                        frontier.push_back(r);
                    }
                }
            }
            CHECK(seen.size() == p.cells.size());
        }
        if (!bg) CHECK(merged == g);  // re-merge reproduces the grid exactly
    }
}

TEST_CASE("render") {
    SUBCASE("empty layer list") {
        auto r = render(G.layers(G.vec(2, 2), G.color(0), {}));
        REQUIRE(r);
        CHECK(r->grid == Grid(2, 2, 0));
    }
    SUBCASE("running task first output") {
        Fig4 f;
        auto r = render(f.pi_out);
        REQUIRE(r);
        Task t = load_fixture("arc/b94a9452.json");
        CHECK(r->grid == std::get<Grid>(t.train[0].output));
    }
    SUBCASE("point of background color is invisible") {
        auto with = render(G.layers(G.vec(3, 3), G.color(5),
                                    {G.layer(G.vec(0, 0), G.colored(G.point(), G.color(5)))}));
        auto without = render(G.layers(G.vec(3, 3), G.color(5), {}));
        REQUIRE(with);
        REQUIRE(without);
        CHECK(with->grid == without->grid);
    }
    SUBCASE("degenerate size") {
        auto r = render(G.layers(G.vec(0, 2), G.color(0), {}));
        REQUIRE(!r);
        CHECK(r.error == "degenerate grid");
    }
    SUBCASE("ungrounded") {
        auto r = render(G.layers(make_unknown(G.kVector), G.color(0), {}));
        REQUIRE(!r);
        CHECK(r.error == "ungrounded description");
    }
    SUBCASE("layer order: lay[0] is topmost") {
        auto r = render(G.layers(G.vec(1, 1), G.color(0),
                                 {G.layer(G.vec(0, 0), G.colored(G.point(), G.color(1))),
                                  G.layer(G.vec(0, 0), G.colored(G.point(), G.color(2)))}));
        REQUIRE(r);
        CHECK(r->grid.at(0, 0) == 1);
    }
    SUBCASE("out-of-grid cells are clipped") {
        auto r = render(
            G.layers(G.vec(2, 2), G.color(0),
                     {G.layer(G.vec(1, 1), G.colored(G.rectangle(G.vec(2, 2), G.mask_named(G.cFull)),
                                                     G.color(3)))}));
        REQUIRE(r);
        CHECK(r->clipped == 3);
        CHECK(r->grid.at(1, 1) == 3);
    }
    SUBCASE("tiling repeats the inner grid") {
        auto r = render(G.tiling(G.raw_grid(make_grid({"12", "34"})), G.vec(4, 6)));
        REQUIRE(r);
        CHECK(r->grid == make_grid({"121212", "343434", "121212", "343434"}));
    }
}

TEST_CASE("grid_diff") {
    SUBCASE("exact description is empty") {
        Fig4 f;
        auto d = grid_diff(render(f.pi_out)->grid, f.pi_out);
        REQUIRE(d);
        CHECK(d->empty());
    }
    SUBCASE("one-cell delta") {
        Grid g(2, 2, 0);
        g.set(0, 1, 2);
        auto d = grid_diff(g, G.layers(G.vec(2, 2), G.color(0), {}));
        REQUIRE(d);
        REQUIRE(d->size() == 1);
        CHECK((*d)[0] == CellDelta{{0, 1}, Color{2}});
    }
    SUBCASE("uncovered band, against a cell-comparison oracle") {
        Grid g = make_grid({"120", "340", "000"});
        const Grid r = make_grid({"12", "34"});
        auto d = grid_diff(g, G.raw_grid(r));
        REQUIRE(d);
        CHECK(d->size() == 5);
        int oracle = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                bool inr = i < r.h && j < r.w;
                if (inr ? g.at(i, j) != r.at(i, j) : true) ++oracle;
            }
        CHECK(int(d->size()) == oracle);
    }
    SUBCASE("render-describe identity on random descriptions") {
        Rng rng(7);
        for (int t = 0; t < 30; ++t) {
            std::vector<NodePtr> lays;
            int n = rng.range(0, 3);
            for (int k = 0; k < n; ++k)
                lays.push_back(
                    G.layer(G.vec(rng.range(0, 4), rng.range(0, 4)),
                            G.colored(G.rectangle(G.vec(rng.range(1, 3), rng.range(1, 3)),
                                                  G.mask_named(G.cFull)),
                                      G.color(rng.range(0, 9)))));
            NodePtr pi =
                G.layers(G.vec(rng.range(3, 8), rng.range(3, 8)), G.color(rng.range(0, 9)), lays);
            auto r = render(pi);
            REQUIRE(r);
            auto d = grid_diff(r->grid, pi);
            REQUIRE(d);
            CHECK(d->empty());
        }
    }
}

TEST_CASE("mask_member") {
    CHECK(*mask_member(MaskTag::Full, nullptr, {2, 2}, 1, 1));
    CHECK_FALSE(*mask_member(MaskTag::Border, nullptr, {3, 3}, 1, 1));
    CHECK_FALSE(*mask_member(MaskTag::EvenCheckboard, nullptr, {2, 2}, 0, 1));
    CHECK(!mask_member(MaskTag::Full, nullptr, {2, 2}, 2, 0));  // out of range

    // Full is constantly true; the checkboards partition every rectangle
    for (int h = 1; h <= 4; ++h)
        for (int w = 1; w <= 4; ++w)
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < w; ++j) {
                    CHECK(*mask_member(MaskTag::Full, nullptr, {h, w}, i, j));
                    bool even = *mask_member(MaskTag::EvenCheckboard, nullptr, {h, w}, i, j);
                    bool odd = *mask_member(MaskTag::OddCheckboard, nullptr, {h, w}, i, j);
                    CHECK(even != odd);
                }
}
