#include "mdli/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mdli/png.hpp"

namespace mdli {

namespace {

std::string fmt1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace

std::string dl_table(const DLReport& rep) {
    std::ostringstream os;
    auto line = [&](const std::string& name, double in, double out, double pair) {
        os << name;
        for (size_t i = name.size(); i < 10; ++i) os << ' ';
        std::string a = fmt1(in), b = fmt1(out), c = fmt1(pair);
        os << std::string(10 - std::min<size_t>(10, a.size()), ' ') << a
           << std::string(10 - std::min<size_t>(10, b.size()), ' ') << b
           << std::string(10 - std::min<size_t>(10, c.size()), ' ') << c << "\n";
    };
    os << "               input    output      pair\n";
    line("L(M)", rep.model_in, rep.model_out, rep.model_total());
    line("L(D|M)", rep.data_in, rep.data_out, rep.data_total());
    line("L(M,D)", rep.input_total(), rep.output_total(), rep.total());
    return os.str();
}

std::string trace_table(const SearchTrace& trace) {
    std::ostringstream os;
    os << "step | refinement | L-hat\n";
    for (const auto& s : trace.steps)
        os << s.step << " | " << s.refinement << " | " << fmt3(s.lhat) << "\n";
    os << "stop: " << trace.stop_reason << "\n";
    return os.str();
}

TaskOutcome solve_task(const Task& task, const LearnConfig& cfg, bool with_log) {
    TaskOutcome out;
    out.id = task.id;
    out.loaded = true;
    const Domain& d = *task.domain;

    LearnResult lr = learn(d, task.train, cfg);
    PruneResult pr = prune(d, lr.model, task.train, cfg);
    out.learned = lr.model;
    out.pruned = pr.model;
    out.trace = lr.trace;
    out.prune_steps = pr.steps;
    out.report = lr.report;
    out.metrics = evaluate(d, pr.model, task, cfg);
    out.metrics.runtime_learning = lr.seconds + pr.seconds;
    out.solved = out.metrics.acc_test_macro == 1.0;

    if (with_log) {
        NodePrinter p = d.printer();
        std::ostringstream log;
        log << "=== task " << task.id << " (" << d.name() << ") ===\n";
        log << "config: alpha=" << cfg.alpha << " parse_limit=" << cfg.parse_limit
            << " keep=" << cfg.keep_descriptions << " max_expr=" << cfg.max_expressions
            << " eval_top=" << cfg.eval_top << " timeout=" << cfg.learn_timeout << "s+"
            << cfg.prune_timeout << "s beam=" << cfg.beam_width
            << " p_unknown=" << Coder::kPUnknown << " p_expr=" << Coder::kPExpr << "\n";
        log << "-- initial model DL --\n" << dl_table(lr.baseline);
        log << "-- learning trace --\n" << trace_table(lr.trace);
        log << "-- learned model --\n";
        log << "input:  " << p(lr.model.input) << "\n";
        log << "output: " << p(lr.model.output) << "\n";
        log << dl_table(lr.report);
        log << "-- pruning --\n";
        if (pr.steps.empty()) log << "(no admissible generalization)\n";
        for (const auto& s : pr.steps) log << s.step << " | " << s.refinement << "\n";
        log << "input:  " << p(pr.model.input) << "\n";
        log << "output: " << p(pr.model.output) << "\n";
        log << "-- joint descriptions (training) --\n";
        for (size_t e = 0; e < task.train.size(); ++e) {
            auto joints = describe(d, pr.model, task.train[e], cfg.parse_limit, 1);
            log << "example " << e << ": ";
            if (joints.empty()) {
                log << "(none)\n";
                continue;
            }
            log << "rho=(" << joints[0].rank_in << "," << joints[0].rank_out
                << ") bits=(" << fmt1(joints[0].bits_in) << "," << fmt1(joints[0].bits_out)
                << ")\n";
            log << "  pi_in:  " << p(joints[0].desc_in) << "\n";
            log << "  pi_out: " << p(joints[0].desc_out) << "\n";
        }
        log << "-- predictions --\n";
        auto show_preds = [&](const std::vector<Example>& exs, const char* name) {
            for (size_t e = 0; e < exs.size(); ++e) {
                auto preds = predict_distinct(d, pr.model, exs[e].input, cfg.parse_limit, 3);
                bool ok = false;
                int rank = 0;
                for (size_t k = 0; k < preds.size(); ++k)
                    if (Domain::datum_eq(preds[k], exs[e].output)) {
                        ok = true;
                        rank = int(k) + 1;
                        break;
                    }
                log << name << "[" << e << "]: " << (ok ? "correct" : "incorrect");
                if (ok) log << " (attempt " << rank << ")";
                log << "\n";
                if (!preds.empty()) log << d.datum_to_text(preds[0]);
            }
        };
        show_preds(task.train, "train");
        show_preds(task.test, "test");
        log << "-- measures --\n";
        log << "runtime-learning: " << fmt3(out.metrics.runtime_learning) << "s\n";
        log << "bits-train-error: " << fmt1(out.metrics.bits_train_error) << "\n";
        log << "acc-train-micro: " << fmt3(out.metrics.acc_train_micro) << "\n";
        log << "acc-train-macro: " << fmt3(out.metrics.acc_train_macro) << "\n";
        log << "acc-train-mrr: " << fmt3(out.metrics.acc_train_mrr) << "\n";
        log << "acc-test-micro: " << fmt3(out.metrics.acc_test_micro) << "\n";
        log << "acc-test-macro: " << fmt3(out.metrics.acc_test_macro) << "\n";
        log << "acc-test-mrr: " << fmt3(out.metrics.acc_test_mrr) << "\n";
        out.log_text = log.str();
    }
    return out;
}

std::string BenchReport::aggregate_json() const {
    nlohmann::json j;
    nlohmann::json results = nlohmann::json::object();
    for (const auto& o : outcomes) {
        nlohmann::json m;
        if (!o.loaded) {
            m["error"] = o.error;
        } else {
            m["solved"] = o.solved;
            m["bits_train_error"] = o.metrics.bits_train_error;
            m["acc_train_micro"] = o.metrics.acc_train_micro;
            m["acc_train_macro"] = o.metrics.acc_train_macro;
            m["acc_train_mrr"] = o.metrics.acc_train_mrr;
            m["acc_test_micro"] = o.metrics.acc_test_micro;
            m["acc_test_macro"] = o.metrics.acc_test_macro;
            m["acc_test_mrr"] = o.metrics.acc_test_mrr;
        }
        results[o.id] = m;
    }
    j["results"] = results;
    j["summary"] = {{"tasks", tasks}, {"solved", solved}, {"failed_to_load", failed_to_load}};
    return j.dump(1);
}

std::string BenchReport::aggregate_json_with_timing() const {
    nlohmann::json j = nlohmann::json::parse(aggregate_json());
    nlohmann::json timing = nlohmann::json::object();
    for (const auto& o : outcomes)
        if (o.loaded) timing[o.id] = o.metrics.runtime_learning;
    j["timing"] = timing;
    j["summary"]["mean_runtime_solved"] = mean_runtime_solved;
    j["summary"]["mean_runtime_all"] = mean_runtime_all;
    return j.dump(1);
}

std::string BenchReport::summary_text() const {
    std::ostringstream os;
    os << "tasks: " << tasks << ", solved: " << solved;
    if (tasks > 0)
        os << " (" << fmt1(100.0 * solved / std::max(1, tasks)) << "%)";
    os << ", load failures: " << failed_to_load << "\n";
    os << "mean runtime over solved: " << fmt1(mean_runtime_solved)
       << "s, over all: " << fmt1(mean_runtime_all) << "s\n";
    return os.str();
}

BenchReport run_benchmark(const std::string& task_dir, const LearnConfig& cfg, int jobs,
                          const std::string& log_path, const std::string& png_dir) {
    namespace fs = std::filesystem;
    BenchReport report;
    std::vector<std::string> files;
    if (fs::exists(task_dir))
        for (const auto& e : fs::directory_iterator(task_dir))
            if (e.is_regular_file() && e.path().extension() == ".json")
                files.push_back(e.path().string());
    std::sort(files.begin(), files.end());

    report.outcomes.resize(files.size());
    std::mutex mu;
    size_t next = 0;
    auto worker = [&]() {
        while (true) {
            size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= files.size()) return;
                i = next++;
            }
            auto task = load_task_file(files[i]);
            if (!task) {
                TaskOutcome o;
                o.id = fs::path(files[i]).stem().string();
                o.error = task.error;
                report.outcomes[i] = std::move(o);
                continue;
            }
            report.outcomes[i] = solve_task(*task, cfg, true);
        }
    };
    int n = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::sort(report.outcomes.begin(), report.outcomes.end(),
              [](const TaskOutcome& a, const TaskOutcome& b) { return a.id < b.id; });

    report.tasks = int(report.outcomes.size());
    double sum_solved = 0, sum_all = 0;
    for (const auto& o : report.outcomes) {
        if (!o.loaded) {
            ++report.failed_to_load;
            continue;
        }
        sum_all += o.metrics.runtime_learning;
        if (o.solved) {
            ++report.solved;
            sum_solved += o.metrics.runtime_learning;
        }
    }
    int loaded = report.tasks - report.failed_to_load;
    report.mean_runtime_solved = report.solved ? sum_solved / report.solved : 0;
    report.mean_runtime_all = loaded ? sum_all / loaded : 0;

    if (!log_path.empty()) {
        std::ofstream f(log_path);
        f << "benchmark: " << task_dir << "\n";
        for (const auto& o : report.outcomes) {
            if (o.loaded)
                f << o.log_text << "\n";
            else
                f << "=== task " << o.id << " ===\nload error: " << o.error << "\n\n";
        }
        f << report.summary_text();
    }
    if (!png_dir.empty()) {
        fs::create_directories(png_dir);
        for (const auto& o : report.outcomes) {
            (void)o;  // per-grid PNGs are written by the render subcommand
        }
    }
    return report;
}

} // namespace mdli
