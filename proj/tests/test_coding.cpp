#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mdli/modes.hpp"
#include "mdli/strings_domain.hpp"

using namespace mdli;
using namespace mdli::test;

namespace {
const GridSchema& G = grid_schema();
const Domain& D = get_grid_domain();
const double LOG10 = std::log2(10.0);
}

TEST_CASE("universal_int is the Elias delta length") {
    CHECK(universal_int(1) == doctest::Approx(1.0));
    // hand-encoded delta of 2 is "0100": 4 bits
    CHECK(universal_int(2) == doctest::Approx(4.0));
    CHECK(universal_int(3) == doctest::Approx(4.0));
    CHECK(universal_int(8) == doctest::Approx(8.0));
    // monotone non-decreasing
    for (long n = 1; n < 1000; ++n) CHECK(universal_int(n) <= universal_int(n + 1));
    // zero extra cost for the first parse
    CHECK(rank_dl(1) == doctest::Approx(0.0));
    CHECK(rank_dl(2) == doctest::Approx(3.0));
}

TEST_CASE("Kraft check: choice probabilities sum to exactly 1") {
    for (const Domain* dom : {&get_grid_domain(), &get_strings_domain()}) {
        Coder coder(*dom);
        // environment variants: none, and signatures of increasing richness
        EnvSignature empty_sig;
        EnvSignature small_sig;
        if (dom == &get_grid_domain()) {
            Fig4 f;
            small_sig = signature_of_model(*dom, f.input);
        } else {
            auto m = dom->initial_model({}, false);
            small_sig = signature_of_model(*dom, m);
        }
        const EnvSignature* envs[] = {nullptr, &empty_sig, &small_sig};
        for (const EnvSignature* env : envs) {
            for (bool allow_unknown : {true, false}) {
                for (KindId k = 0; k < KindId(dom->schema().kinds.size()); ++k) {
                    auto dist = coder.choice_distribution(k, Coder::Ctx{allow_unknown, env});
                    double sum = 0;
                    for (auto& [label, p] : dist) {
                        CHECK(p > 0.0);
                        sum += p;
                    }
                    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("model_dl") {
    Coder coder(D);
    SUBCASE("the initial unknown grid model costs exactly 3 bits") {
        auto bits = coder.model_dl(make_unknown(G.kGrid), nullptr);
        REQUIRE(bits);
        CHECK(*bits == doctest::Approx(3.0));
    }
    SUBCASE("adding a layer makes the model longer") {
        Fig4 f;
        auto base = coder.model_dl(f.input, nullptr);
        NodePtr extra = G.layer(make_unknown(G.kVector),
                                G.colored(G.point(), make_unknown(G.kColor)));
        auto bigger = insert_list_elem(G.schema, f.input, {}, 2, extra);
        REQUIRE(bigger);
        auto more = coder.model_dl(*bigger, nullptr);
        REQUIRE(base);
        REQUIRE(more);
        CHECK(*base < *more);
    }
    SUBCASE("replacing an unknown color by a constant changes DL by the formula") {
        // input side: concrete mass 7/8; Color has a single (value) alternative
        auto unknown_bits = coder.node_dl(make_unknown(G.kColor), G.kColor, {true, nullptr});
        auto const_bits = coder.node_dl(G.color(0), G.kColor, {true, nullptr});
        REQUIRE(unknown_bits);
        REQUIRE(const_bits);
        CHECK(*unknown_bits == doctest::Approx(3.0));
        CHECK(*const_bits == doctest::Approx(-std::log2(7.0 / 8.0) + LOG10));
    }
    SUBCASE("a named mask is slightly longer than an unknown") {
        // two-level mask coding: bitmap vs named, then uniform among 4
        auto full_bits = coder.node_dl(G.mask_named(G.cFull), G.kMask, {true, nullptr});
        REQUIRE(full_bits);
        CHECK(*full_bits == doctest::Approx(-std::log2(7.0 / 8.0 * 0.5 * 0.25)));
        CHECK(*full_bits > 3.0);
    }
    SUBCASE("references cost the expression branch plus the component choice") {
        Fig4 f;
        EnvSignature sig = signature_of_model(D, f.input);
        int n = sig.count_compatible(G.schema, G.kColor);
        REQUIRE(n > 0);
        auto bits = coder.node_dl(make_ref(G.kColor, *path_from_string("lay[0].object.color")),
                                  G.kColor, {true, &sig});
        REQUIRE(bits);
        CHECK(*bits == doctest::Approx(-std::log2(0.25 / 2.0) + std::log2(double(n))));
    }
}

TEST_CASE("description_dl") {
    Coder coder(D);
    Fig4 f;
    SUBCASE("ground model has nothing to encode") {
        auto reduced = resolve(D, f.output, f.pi_in);
        REQUIRE(reduced);
        auto bits = coder.description_dl(f.pi_out, *reduced);
        REQUIRE(bits);
        CHECK(*bits == doctest::Approx(0.0));
    }
    SUBCASE("literal grounding of the unknown grid") {
        Grid g = make_grid({"12", "34"});
        auto bits = coder.description_dl(G.raw_grid(g), make_unknown(G.kGrid));
        REQUIRE(bits);
        double expect = std::log2(3.0)  // Layers | Tiling | raw value
                        + universal_int(3) + universal_int(3) + 4 * LOG10;
        CHECK(*bits == doctest::Approx(expect));
    }
    SUBCASE("grounding charges only the unknowns") {
        NodePtr model = G.layers(make_unknown(G.kVector), make_unknown(G.kColor), {});
        NodePtr desc = G.layers(G.vec(12, 13), G.color(0), {});
        auto bits = coder.description_dl(desc, model);
        REQUIRE(bits);
        double vec_bits = universal_int(13) + universal_int(14);  // U(12+1), U(13+1)
        CHECK(*bits == doctest::Approx(vec_bits + LOG10));
    }
    SUBCASE("mask groundings prefer named masks") {
        NodePtr model = make_unknown(G.kMask);
        auto named = coder.description_dl(G.mask_named(G.cFull), model);
        auto bitmap = coder.description_dl(G.mask_bitmap(Bitmap(2, 2, 1)), model);
        REQUIRE(named);
        REQUIRE(bitmap);
        CHECK(*named == doctest::Approx(3.0));  // 1/2 * 1/4
        CHECK(*named < *bitmap);
    }
}

TEST_CASE("grid residual DL") {
    const Domain& d = D;
    SUBCASE("exactness means zero bits") {
        Fig4 f;
        Task t = load_fixture("arc/b94a9452.json");
        CHECK(d.residual_dl(t.train[0].output, f.pi_out) == doctest::Approx(0.0));
    }
    SUBCASE("one wrong cell in a 12x13 grid") {
        Grid g(12, 13, 0);
        g.set(3, 5, 2);
        NodePtr pi = G.layers(G.vec(12, 13), G.color(0), {});
        double expect = universal_int(2) - universal_int(1) + std::log2(12.0 * 13.0) + LOG10;
        CHECK(d.residual_dl(Datum{g}, pi) == doctest::Approx(expect));
    }
    SUBCASE("a fully wrong grid costs more than the literal") {
        // parsing must prefer honest literals on noise
        Coder coder(d);
        for (int h = 2; h <= 30; ++h)
            for (int w = 2; w <= 30; ++w) {
                double residual = universal_int(long(h) * w + 1) - universal_int(1) +
                                  double(h) * w * (std::log2(double(h) * w) + LOG10);
                auto literal = coder.description_dl(G.raw_grid(Grid(h, w, 1)),
                                                    make_unknown(G.kGrid));
                REQUIRE(literal);
                CHECK(residual > *literal);
            }
    }
    SUBCASE("clipped cells count as deltas") {
        NodePtr pi = G.layers(G.vec(2, 2), G.color(0),
                              {G.layer(G.vec(1, 1),
                                       G.colored(G.rectangle(G.vec(2, 2), G.mask_named(G.cFull)),
                                                 G.color(3)))});
        Grid g = std::get<Grid>(*d.render_datum(pi));
        CHECK(d.residual_dl(Datum{g}, pi) > 0.0);  // 3 clipped cells
    }
}

TEST_CASE("example_dl") {
    SUBCASE("initial model pays the literal coding of both grids") {
        Task t = load_fixture("arc/b94a9452.json");
        TaskModel init{make_unknown(G.kGrid), make_unknown(G.kGrid)};
        Coder coder(D);
        for (const auto& ex : t.train) {
            auto e = example_dl(D, init, ex, 64);
            REQUIRE(e.best.has_value());
            auto lit_in = coder.description_dl(G.raw_grid(std::get<Grid>(ex.input)),
                                               make_unknown(G.kGrid));
            auto lit_out = coder.description_dl(G.raw_grid(std::get<Grid>(ex.output)),
                                                make_unknown(G.kGrid));
            CHECK(e.bits_in == doctest::Approx(*lit_in));
            CHECK(e.bits_out == doctest::Approx(*lit_out));
        }
    }
    SUBCASE("running model reaches zero output bits") {
        Task t = load_fixture("arc/b94a9452.json");
        Fig4 f;
        TaskModel m{f.input, f.output};
        for (const auto& ex : t.train) {
            auto e = example_dl(D, m, ex, 64);
            REQUIRE(e.best.has_value());
            CHECK(e.bits_out == doctest::Approx(0.0));
            CHECK(e.best->rank_in == 1);
        }
    }
    SUBCASE("infinite sentinel when describe is empty") {
        // an output model with a dangling reference cannot describe anything
        TaskModel m{make_unknown(G.kGrid),
                    make_ref(G.kGrid, *path_from_string("lay[9].object"))};
        Task t = load_fixture("arc/b94a9452.json");
        auto e = example_dl(D, m, t.train[0], 64);
        CHECK(e.total() >= kInfiniteDL);
    }
}

TEST_CASE("example_dl equals brute-force joint minimization on small fixtures") {
    // oracle: enumerate every grounding of the unknowns over small domains,
    // rank each side by its DL, and minimize the joint total
    Coder coder(D);
    auto groundings = [&](const NodePtr& model, const Grid& g) {
        std::vector<NodePtr> out;
        std::vector<std::pair<Path, KindId>> slots;
        Path prefix;
        walk_model(G.schema, model, prefix, [&](const Path& p, const NodePtr& n) {
            if (n->tag == Tag::Unknown) slots.push_back({p, n->kind});
        });
        std::function<void(size_t, NodePtr)> rec = [&](size_t s, NodePtr cur) {
            if (s == slots.size()) {
                out.push_back(cur);
                return;
            }
            std::vector<NodePtr> domain_vals;
            KindId k = slots[s].second;
            if (k == G.kGrid) {
                domain_vals.push_back(G.raw_grid(g));
            } else if (k == G.kColor) {
                for (int c = 0; c < 10; ++c) domain_vals.push_back(G.color(c));
            } else if (k == G.kVector) {
                for (int i = 0; i <= 3; ++i)
                    for (int j = 0; j <= 3; ++j) domain_vals.push_back(G.vec(i, j));
            } else if (k == G.kInt) {
                for (int i = 0; i <= 3; ++i) domain_vals.push_back(make_val(G.kInt, i));
            } else if (k == G.kMask) {
                for (CtorId m : {G.cFull, G.cBorder, G.cEvenCheckboard, G.cOddCheckboard})
                    domain_vals.push_back(G.mask_named(m));
            }
            for (const auto& v : domain_vals) {
                auto r = replace_at(G.schema, cur, slots[s].first,
                                    [&](const NodePtr&) { return v; });
                if (r) rec(s + 1, *r);
            }
        };
        rec(0, model);
        return out;
    };
    auto side_candidates = [&](const NodePtr& model, const NodePtr& env, const Grid& g) {
        // (bits, desc) sorted like the parser ranks them
        std::vector<std::pair<double, NodePtr>> cands;
        auto reduced = resolve(D, model, env);
        if (!reduced) return cands;
        for (const auto& desc : groundings(*reduced, g)) {
            auto ddl = coder.description_dl(desc, *reduced);
            if (!ddl) continue;
            Bits res = D.residual_dl(Datum{g}, desc);
            if (res >= kInfiniteDL) continue;
            cands.push_back({*ddl + res, desc});
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        return cands;
    };
    auto oracle = [&](const TaskModel& m, const Example& ex) {
        const Grid& gi = std::get<Grid>(ex.input);
        const Grid& go = std::get<Grid>(ex.output);
        double best = kInfiniteDL;
        auto ins = side_candidates(m.input, nullptr, gi);
        for (size_t ri = 0; ri < ins.size(); ++ri) {
            auto outs = side_candidates(m.output, ins[ri].second, go);
            for (size_t ro = 0; ro < outs.size(); ++ro) {
                double total = rank_dl(int(ri) + 1) + ins[ri].first + rank_dl(int(ro) + 1) +
                               outs[ro].first;
                best = std::min(best, total);
            }
        }
        return best;
    };

    std::vector<std::pair<TaskModel, Example>> fixtures;
    // (?, ?) on a 2x2 -> 3x3 pair
    fixtures.push_back({TaskModel{make_unknown(G.kGrid), make_unknown(G.kGrid)},
                        Example{Datum{make_grid({"12", "30"})}, Datum{make_grid({"111", "121", "111"})}}});
    // one point layer with unknown position/color on each side
    NodePtr point_model = G.layers(make_unknown(G.kVector), G.color(0),
                                   {G.layer(make_unknown(G.kVector),
                                            G.colored(G.point(), make_unknown(G.kColor)))});
    fixtures.push_back({TaskModel{point_model, point_model},
                        Example{Datum{make_grid({"000", "020", "000"})},
                                Datum{make_grid({"000", "000", "050"})}}});
    // output copies the input object color through a reference
    NodePtr out_ref = G.layers(make_unknown(G.kVector),
                               make_ref(G.kColor, *path_from_string("lay[0].object.color")), {});
    fixtures.push_back({TaskModel{point_model, out_ref},
                        Example{Datum{make_grid({"000", "070", "000"})},
                                Datum{make_grid({"77", "77"})}}});

    for (auto& [m, ex] : fixtures) {
        auto e = example_dl(D, m, ex, 64);
        double expect = oracle(m, ex);
        REQUIRE(expect < kInfiniteDL);
        REQUIRE(e.best.has_value());
        CHECK(e.total() == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("task_dl") {
    Task t = load_fixture("arc/b94a9452.json");
    Fig4 f;
    TaskModel m{f.input, f.output};
    SUBCASE("running model: zero output data, positive input data") {
        DLReport rep = task_dl(D, m, t.train, 10, 64);
        CHECK(rep.data_out == doctest::Approx(0.0));
        CHECK(rep.data_in > 0.0);
        CHECK(rep.model_in > 0.0);
        CHECK(rep.model_out > 0.0);
    }
    SUBCASE("data terms scale linearly with alpha") {
        DLReport a1 = task_dl(D, m, t.train, 1, 64);
        DLReport a10 = task_dl(D, m, t.train, 10, 64);
        CHECK(a10.data_in == doctest::Approx(10.0 * a1.data_in));
        CHECK(a10.data_out == doctest::Approx(10.0 * a1.data_out));
        CHECK(a10.model_in == doctest::Approx(a1.model_in));
        CHECK(a10.model_out == doctest::Approx(a1.model_out));
    }
    SUBCASE("empty training set has zero data terms") {
        DLReport rep = task_dl(D, m, {}, 10, 64);
        CHECK(rep.data_in == doctest::Approx(0.0));
        CHECK(rep.data_out == doctest::Approx(0.0));
    }
}

TEST_CASE("normalized_dl") {
    DLReport base{100.0, 50.0, 900.0, 450.0, 10};
    SUBCASE("initial model against itself is exactly 2") {
        auto n = normalized_dl(base, base);
        REQUIRE(n);
        CHECK(*n == 2.0);
    }
    SUBCASE("halving both sides halves the value") {
        DLReport half{50.0, 25.0, 450.0, 225.0, 10};
        auto n = normalized_dl(half, base);
        REQUIRE(n);
        CHECK(*n == doctest::Approx(1.0));
    }
    SUBCASE("zero baseline side is an error") {
        DLReport zero{0, 0, 0, 0, 10};
        CHECK(!normalized_dl(base, zero));
    }
}

TEST_CASE("prediction_dl") {
    Task t = load_fixture("arc/b94a9452.json");
    Fig4 f;
    TaskModel m{f.input, f.output};
    Coder coder(D);
    SUBCASE("rank-1 parses and exact outputs leave only the model cost") {
        Bits p = prediction_dl(D, m, t.train, 10, 64);
        auto mi = coder.model_dl(m.input, nullptr);
        EnvSignature sig = signature_of_model(D, m.input);
        auto mo = coder.model_dl(m.output, &sig);
        CHECK(p == doctest::Approx(*mi + *mo));
    }
    SUBCASE("generalizing the background color does not increase it") {
        auto generalized = replace_at(G.schema, m.input, *path_from_string("color"),
                                      [&](const NodePtr&) { return make_unknown(G.kColor); });
        REQUIRE(generalized);
        TaskModel g{*generalized, m.output};
        CHECK(prediction_dl(D, g, t.train, 10, 64) <= prediction_dl(D, m, t.train, 10, 64));
    }
}
