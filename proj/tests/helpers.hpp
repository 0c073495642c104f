#pragma once

#include <fstream>
#include <sstream>

#include "mdli/coding.hpp"
#include "mdli/grid_domain.hpp"
#include "mdli/task.hpp"

namespace mdli::test {

inline std::string data_path(const std::string& rel) {
    return std::string(MDLI_DATA_DIR) + "/" + rel;
}

inline Task load_fixture(const std::string& rel) {
    auto t = load_task_file(data_path(rel));
    if (!t) throw std::runtime_error("fixture: " + t.error);
    return *t;
}

inline Grid make_grid(const std::vector<std::string>& rows) {
    Grid g(int(rows.size()), int(rows[0].size()));
    for (int i = 0; i < g.h; ++i)
        for (int j = 0; j < g.w; ++j) g.set(i, j, uint8_t(rows[size_t(i)][size_t(j)] - '0'));
    return g;
}

// The correct model for the running task, as printed in the learning trace.
struct Fig4 {
    const GridSchema& G = grid_schema();
    NodePtr input;
    NodePtr output;
    NodePtr pi_in;   // parse of the first training input
    NodePtr pi_out;  // generated description of the first training output

    Fig4() {
        auto unk = [&](KindId k) { return make_unknown(k); };
        auto rect_layer = [&]() {
            return G.layer(unk(G.kVector),
                           G.colored(G.rectangle(unk(G.kVector), G.mask_named(G.cFull)),
                                     unk(G.kColor)));
        };
        input = G.layers(unk(G.kVector), G.color(0), {rect_layer(), rect_layer()});

        auto path = [&](const std::string& s) { return *path_from_string(s); };
        const auto& fns = grid_functions();
        FuncId sub_vec = *fns.find("sub", {G.kVector, G.kVector});
        FuncId coloring = *fns.find("coloring", {G.kObject, G.kColor});
        NodePtr pos_expr = make_apply(G.kVector, sub_vec,
                                      {make_ref(G.kVector, path("lay[0].pos")),
                                       make_ref(G.kVector, path("lay[1].pos"))});
        NodePtr obj_expr = make_apply(G.kObject, coloring,
                                      {make_ref(G.kObject, path("lay[0].object")),
                                       make_ref(G.kColor, path("lay[1].object.color"))});
        output = G.layers(make_ref(G.kVector, path("lay[1].object.shape.size")),
                          make_ref(G.kColor, path("lay[0].object.color")),
                          {make_pat(G.schema, G.cLayer, {pos_expr, obj_expr})});

        pi_in = G.layers(
            G.vec(12, 13), G.color(0),
            {G.layer(G.vec(2, 4),
                     G.colored(G.rectangle(G.vec(2, 2), G.mask_named(G.cFull)), G.color(4))),
             G.layer(G.vec(1, 3),
                     G.colored(G.rectangle(G.vec(4, 4), G.mask_named(G.cFull)), G.color(2)))});
        pi_out = G.layers(
            G.vec(4, 4), G.color(4),
            {G.layer(G.vec(1, 1),
                     G.colored(G.rectangle(G.vec(2, 2), G.mask_named(G.cFull)), G.color(2)))});
    }
};

} // namespace mdli::test
