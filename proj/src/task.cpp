#include "mdli/task.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mdli {

namespace {

using nlohmann::json;

Result<Datum> datum_from_json(const json& j, const std::string& where, const Domain** domain) {
    using R = Result<Datum>;
    if (j.is_string()) {
        *domain = &get_strings_domain();
        return R::ok(Datum{Row{{j.get<std::string>()}}});
    }
    if (!j.is_array() || j.empty()) return R::fail(where + ": expected a non-empty array");
    if (j[0].is_string()) {
        Row row;
        for (const auto& c : j) {
            if (!c.is_string()) return R::fail(where + ": mixed string/number row");
            row.cells.push_back(c.get<std::string>());
        }
        *domain = &get_strings_domain();
        return R::ok(Datum{std::move(row)});
    }
    if (!j[0].is_array()) return R::fail(where + ": expected a matrix or strings");
    Grid g;
    g.h = int(j.size());
    g.w = int(j[0].size());
    if (g.h < 1 || g.w < 1 || g.h > 30 || g.w > 30)
        return R::fail(where + ": grid size out of 1..30");
    for (const auto& rowj : j) {
        if (!rowj.is_array() || int(rowj.size()) != g.w)
            return R::fail(where + ": ragged matrix");
        for (const auto& cj : rowj) {
            if (!cj.is_number_integer()) return R::fail(where + ": non-integer cell");
            int v = cj.get<int>();
            if (v < 0 || v >= kNumColors)
                return R::fail(where + ": color value " + std::to_string(v) + " out of 0..9");
            g.cells.push_back(uint8_t(v));
        }
    }
    *domain = &get_grid_domain();
    return R::ok(Datum{std::move(g)});
}

Result<std::vector<Example>> examples_from_json(const json& j, const std::string& where,
                                                const Domain** domain) {
    using R = Result<std::vector<Example>>;
    if (!j.is_array()) return R::fail(where + ": expected an array");
    std::vector<Example> out;
    for (size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        std::string at = where + "[" + std::to_string(i) + "]";
        if (!e.is_object() || !e.contains("input") || !e.contains("output"))
            return R::fail(at + ": expected {\"input\", \"output\"}");
        auto in = datum_from_json(e["input"], at + ".input", domain);
        if (!in) return R::fail(in.error);
        auto outp = datum_from_json(e["output"], at + ".output", domain);
        if (!outp) return R::fail(outp.error);
        out.push_back({*in, *outp});
    }
    return R::ok(std::move(out));
}

} // namespace

Result<Task> load_task(const std::string& json_text, const std::string& id) {
    using R = Result<Task>;
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) return R::fail(id + ": malformed JSON");
    if (!j.is_object() || !j.contains("train") || !j.contains("test"))
        return R::fail(id + ": expected {\"train\", \"test\"}");
    Task t;
    t.id = id;
    const Domain* domain = nullptr;
    auto train = examples_from_json(j["train"], "train", &domain);
    if (!train) return R::fail(id + ": " + train.error);
    auto test = examples_from_json(j["test"], "test", &domain);
    if (!test) return R::fail(id + ": " + test.error);
    t.train = std::move(*train);
    t.test = std::move(*test);
    t.domain = domain;
    if (t.train.empty()) return R::fail(id + ": no training examples");
    return R::ok(std::move(t));
}

Result<Task> load_task_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) return Result<Task>::fail("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string stem = path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return load_task(ss.str(), stem);
}

std::string datum_to_json(const Datum& d) {
    json j;
    if (std::holds_alternative<Grid>(d)) {
        const Grid& g = std::get<Grid>(d);
        j = json::array();
        for (int i = 0; i < g.h; ++i) {
            json row = json::array();
            for (int jj = 0; jj < g.w; ++jj) row.push_back(int(g.at(i, jj)));
            j.push_back(row);
        }
    } else {
        const Row& r = std::get<Row>(d);
        j = json::array();
        for (const auto& c : r.cells) j.push_back(c);
    }
    return j.dump();
}

std::string task_to_json(const Task& t) {
    json j;
    auto examples = [&](const std::vector<Example>& exs) {
        json arr = json::array();
        for (const auto& e : exs) {
            json o;
            o["input"] = json::parse(datum_to_json(e.input));
            o["output"] = json::parse(datum_to_json(e.output));
            arr.push_back(o);
        }
        return arr;
    };
    j["train"] = examples(t.train);
    j["test"] = examples(t.test);
    return j.dump(1);
}

Metrics evaluate(const Domain& d, const TaskModel& m, const Task& task, const LearnConfig& cfg) {
    Metrics out;
    auto score = [&](const std::vector<Example>& exs, double& micro, double& macro, double& mrr) {
        if (exs.empty()) {
            micro = macro = mrr = 0;
            return;
        }
        int correct = 0;
        double rr = 0;
        bool all = true;
        for (const auto& ex : exs) {
            auto preds = predict_distinct(d, m, ex.input, cfg.parse_limit, 3);
            int rank = 0;
            for (size_t k = 0; k < preds.size(); ++k)
                if (Domain::datum_eq(preds[k], ex.output)) {
                    rank = int(k) + 1;
                    break;
                }
            if (rank > 0) {
                ++correct;
                rr += 1.0 / rank;
            } else {
                all = false;
            }
        }
        micro = double(correct) / double(exs.size());
        macro = all ? 1.0 : 0.0;
        mrr = rr / double(exs.size());
    };
    score(task.train, out.acc_train_micro, out.acc_train_macro, out.acc_train_mrr);
    score(task.test, out.acc_test_micro, out.acc_test_macro, out.acc_test_mrr);
    for (const auto& ex : task.train) {
        auto e = example_dl(d, m, ex, cfg.parse_limit);
        if (e.best)
            out.bits_train_error += d.residual_dl(ex.output, e.best->desc_out);
        else
            out.bits_train_error += d.datum_literal_dl(ex.output);
    }
    return out;
}

} // namespace mdli
