#include <doctest.h>

#include "helpers.hpp"
#include "mdli/modes.hpp"

using namespace mdli;
using namespace mdli::test;

namespace {
const GridSchema& G = grid_schema();
const Domain& D = get_grid_domain();
}

TEST_CASE("parse") {
    Task t = load_fixture("arc/b94a9452.json");
    SUBCASE("unknown grid parses as the literal") {
        auto r = D.parse(make_unknown(G.kGrid), nullptr, t.train[0].input, 64);
        REQUIRE(r.size() == 1);
        CHECK(r[0].rank == 1);
        CHECK(node_eq(r[0].desc, G.raw_grid(std::get<Grid>(t.train[0].input))));
    }
    SUBCASE("running input model: rank-1 is the printed description") {
        Fig4 f;
        auto r = D.parse(f.input, nullptr, t.train[0].input, 64);
        REQUIRE(!r.empty());
        CHECK(node_eq(r[0].desc, f.pi_in));
    }
    SUBCASE("two identical objects give one parse per assignment") {
        // 5x5 with two separate 1x1 red points; single-layer model
        Grid g(5, 5, 0);
        g.set(1, 1, 2);
        g.set(3, 3, 2);
        NodePtr m = G.layers(make_unknown(G.kVector), G.color(0),
                             {G.layer(make_unknown(G.kVector),
                                      G.colored(G.point(), make_unknown(G.kColor)))});
        auto r = D.parse(m, nullptr, Datum{g}, 64);
        int points = 0;
        for (const auto& pr : r) {
            auto pos = lookup(D, pr.desc, *path_from_string("lay[0].pos"));
            REQUIRE(pos);
            points += node_eq(*pos, G.vec(1, 1)) || node_eq(*pos, G.vec(3, 3));
        }
        CHECK(points >= 2);
    }
    SUBCASE("more layers than objects fails") {
        Grid g(4, 4, 0);
        g.set(0, 0, 3);
        Fig4 f;  // two rectangle layers demanded, one object present
        auto r = D.parse(f.input, nullptr, Datum{g}, 64);
        CHECK(r.empty());
    }
    SUBCASE("ranking is monotone in dl and ranks are gapless") {
        Fig4 f;
        NodePtr loose = G.layers(make_unknown(G.kVector), make_unknown(G.kColor),
                                 {G.layer(make_unknown(G.kVector),
                                          G.colored(G.rectangle(make_unknown(G.kVector),
                                                                make_unknown(G.kMask)),
                                                    make_unknown(G.kColor)))});
        auto r = D.parse(loose, nullptr, t.train[0].input, 64);
        REQUIRE(!r.empty());
        for (size_t i = 0; i < r.size(); ++i) {
            CHECK(r[i].rank == int(i) + 1);
            if (i) CHECK(r[i - 1].dl <= r[i].dl);
        }
    }
    SUBCASE("parse soundness: every result matches the reduced model") {
        Fig4 f;
        auto reduced = resolve(D, f.input, nullptr);
        REQUIRE(reduced);
        for (const auto& ex : t.train) {
            auto r = D.parse(f.input, nullptr, ex.input, 64);
            for (const auto& pr : r) CHECK(match_pattern(D, *reduced, pr.desc));
        }
    }
}

TEST_CASE("generate") {
    SUBCASE("ground model yields exactly one result") {
        Fig4 f;
        Task t = load_fixture("arc/b94a9452.json");
        auto in_parses = D.parse(f.input, nullptr, t.train[0].input, 64);
        REQUIRE(!in_parses.empty());
        auto gens = D.generate(f.output, in_parses[0].desc, 8, nullptr);
        REQUIRE(gens.size() == 1);
        CHECK(Domain::datum_eq(gens[0].datum, t.train[0].output));
    }
    SUBCASE("constant model renders itself") {
        NodePtr m = G.layers(G.vec(1, 1), G.color(0), {});
        auto gens = D.generate(m, nullptr, 4, nullptr);
        REQUIRE(gens.size() == 1);
        CHECK(std::get<Grid>(gens[0].datum) == Grid(1, 1, 0));
    }
    SUBCASE("unknown color enumerates the ten colors") {
        NodePtr m = G.layers(G.vec(2, 2), make_unknown(G.kColor), {});
        auto gens = D.generate(m, nullptr, 10, nullptr);
        REQUIRE(gens.size() == 10);
        std::vector<uint8_t> seen;
        for (const auto& g : gens) {
            const Grid& grid = std::get<Grid>(g.datum);
            CHECK(grid == Grid(2, 2, grid.at(0, 0)));
            seen.push_back(grid.at(0, 0));
        }
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        CHECK(seen.size() == 10);  // all distinct
        // the deterministic default comes first
        CHECK(std::get<Grid>(gens[0].datum).at(0, 0) == 0);
    }
    SUBCASE("dangling reference fails") {
        NodePtr m = make_ref(G.kGrid, *path_from_string("lay[3].object.grid"));
        auto gens = D.generate(m, nullptr, 4, nullptr);
        CHECK(gens.empty());
    }
}

TEST_CASE("predict") {
    Task t = load_fixture("arc/b94a9452.json");
    Fig4 f;
    TaskModel m{f.input, f.output};
    SUBCASE("running model solves the test input") {
        auto preds = predict_distinct(D, m, t.test[0].input, 64, 3);
        REQUIRE(!preds.empty());
        CHECK(Domain::datum_eq(preds[0], t.test[0].output));
    }
    SUBCASE("constant output model predicts the constant") {
        Grid c = make_grid({"55", "55"});
        TaskModel cm{make_unknown(G.kGrid), G.raw_grid(c)};
        auto preds = predict_distinct(D, cm, t.train[1].input, 64, 3);
        REQUIRE(!preds.empty());
        CHECK(std::get<Grid>(preds[0]) == c);
    }
    SUBCASE("missing referenced layer yields no predictions") {
        NodePtr bad_out = G.layers(make_ref(G.kVector, *path_from_string("lay[1].pos")),
                                   G.color(0), {});
        NodePtr one_layer = G.layers(make_unknown(G.kVector), G.color(0),
                                     {G.layer(make_unknown(G.kVector),
                                              G.colored(G.point(), make_unknown(G.kColor)))});
        Grid g(3, 3, 0);
        g.set(1, 1, 4);
        auto preds = predict(D, TaskModel{one_layer, bad_out}, Datum{g}, 64, 8);
        CHECK(preds.empty());
    }
}

TEST_CASE("describe") {
    Task t = load_fixture("arc/b94a9452.json");
    SUBCASE("initial model describes everything as literals") {
        TaskModel init{make_unknown(G.kGrid), make_unknown(G.kGrid)};
        for (const auto& ex : t.train) {
            auto joints = describe(D, init, ex, 64, 3);
            REQUIRE(!joints.empty());
            CHECK(node_eq(joints[0].desc_in, G.raw_grid(std::get<Grid>(ex.input))));
            CHECK(node_eq(joints[0].desc_out, G.raw_grid(std::get<Grid>(ex.output))));
        }
    }
    SUBCASE("running model: rank-1 joint is the printed pair") {
        Fig4 f;
        auto joints = describe(D, TaskModel{f.input, f.output}, t.train[0], 64, 3);
        REQUIRE(!joints.empty());
        CHECK(node_eq(joints[0].desc_in, f.pi_in));
        CHECK(node_eq(joints[0].desc_out, f.pi_out));
        CHECK(joints[0].rank_in == 1);
        CHECK(joints[0].bits_out == doctest::Approx(0.0));
    }
    SUBCASE("a perturbed output is charged to the residual") {
        Fig4 f;
        Example ex = t.train[0];
        Grid out = std::get<Grid>(ex.output);
        out.set(0, 0, 9);
        ex.output = out;
        auto joints = describe(D, TaskModel{f.input, f.output}, ex, 64, 3);
        REQUIRE(!joints.empty());
        CHECK(joints[0].bits_out > 0.0);
    }
}

TEST_CASE("create") {
    Fig4 f;
    TaskModel m{f.input, f.output};
    SUBCASE("constant model always creates the same pair") {
        TaskModel cm{G.layers(G.vec(2, 2), G.color(1), {}), G.raw_grid(make_grid({"3"}))};
        auto a = create(D, cm, 1, 64);
        auto b = create(D, cm, 99, 64);
        REQUIRE(a);
        REQUIRE(b);
        CHECK(Domain::datum_eq(a->input, b->input));
        CHECK(Domain::datum_eq(a->output, b->output));
    }
    SUBCASE("self-consistency: created pairs are solved by the model") {
        int conclusive = 0, correct = 0;
        for (uint64_t seed = 0; seed < 100; ++seed) {
            auto pair = create(D, m, seed, 64);
            if (!pair) continue;
            auto parses = D.parse(f.input, nullptr, pair->input, 64);
            if (parses.empty()) continue;
            if (parses.size() > 1 && parses[1].dl - parses[0].dl <= 1e-9) continue;  // ambiguous
            ++conclusive;
            auto preds = predict_distinct(D, m, pair->input, 64, 1);
            if (!preds.empty() && Domain::datum_eq(preds[0], pair->output)) ++correct;
        }
        CHECK(conclusive >= 20);
        CHECK(correct == conclusive);
    }
    SUBCASE("different seeds vary the unknowns consistently") {
        auto a = create(D, m, 3, 64);
        auto b = create(D, m, 4, 64);
        REQUIRE(a);
        REQUIRE(b);
        CHECK(!Domain::datum_eq(a->input, b->input));
    }
}

TEST_CASE("tiling parse and periodic grids") {
    Grid g = make_grid({"1212", "3434", "1212", "3434"});
    NodePtr m = G.tiling(make_unknown(G.kGrid), make_unknown(G.kVector));
    auto r = D.parse(m, nullptr, Datum{g}, 64);
    REQUIRE(!r.empty());
    // rank-1 uses the smallest period
    auto inner = lookup(D, r[0].desc, *path_from_string("grid"));
    REQUIRE(inner);
    CHECK(node_eq(*inner, G.raw_grid(make_grid({"12", "34"}))));
    auto rendered = D.render_datum(r[0].desc);
    REQUIRE(rendered);
    CHECK(std::get<Grid>(*rendered) == g);
}
