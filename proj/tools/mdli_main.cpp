#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mdli/png.hpp"
#include "mdli/runner.hpp"

using namespace mdli;

namespace {

struct CommonOpts {
    LearnConfig cfg;
    std::string domain = "auto";
    std::string log_path;
    std::string png_dir;
    int jobs = 1;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--timeout", o.cfg.learn_timeout, "learning timeout in seconds");
    app->add_option("--prune-timeout", o.cfg.prune_timeout, "pruning timeout in seconds");
    app->add_option("--alpha", o.cfg.alpha, "rehearsal factor");
    app->add_option("--parse-limit", o.cfg.parse_limit, "max descriptions per parse");
    app->add_option("--keep", o.cfg.keep_descriptions, "joint descriptions kept per example");
    app->add_option("--max-expr", o.cfg.max_expressions, "max expressions per step");
    app->add_option("--eval-top", o.cfg.eval_top, "refinements fully evaluated per step");
    app->add_option("--beam", o.cfg.beam_width, "beam width (1 = greedy)");
    app->add_option("--domain", o.domain, "grid|string|auto")
        ->check(CLI::IsMember({"grid", "string", "auto"}));
    app->add_option("--seed", o.cfg.seed, "random seed");
    app->add_option("--log", o.log_path, "write a detailed log to this file");
    app->add_option("--png", o.png_dir, "write PNG grids into this directory");
    app->add_option("--jobs", o.jobs, "parallel workers for bench");
}

Result<Task> load_checked(const std::string& path, const std::string& domain) {
    auto task = load_task_file(path);
    if (!task) return task;
    if (domain == "grid" && task->domain != &get_grid_domain())
        return Result<Task>::fail(path + ": not a grid task");
    if (domain == "string" && task->domain != &get_strings_domain())
        return Result<Task>::fail(path + ": not a string task");
    return task;
}

void write_pngs(const Task& task, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto dump = [&](const Datum& d, const std::string& name) {
        if (!std::holds_alternative<Grid>(d)) return;
        auto r = write_png(dir + "/" + name + ".png", std::get<Grid>(d));
        if (!r) std::cerr << "png: " << r.error << "\n";
    };
    for (size_t i = 0; i < task.train.size(); ++i) {
        dump(task.train[i].input, task.id + "_train" + std::to_string(i) + "_in");
        dump(task.train[i].output, task.id + "_train" + std::to_string(i) + "_out");
    }
    for (size_t i = 0; i < task.test.size(); ++i) {
        dump(task.test[i].input, task.id + "_test" + std::to_string(i) + "_in");
        dump(task.test[i].output, task.id + "_test" + std::to_string(i) + "_out");
    }
}

int cmd_solve(const std::string& path, const CommonOpts& o) {
    auto task = load_checked(path, o.domain);
    if (!task) {
        std::cerr << task.error << "\n";
        return 1;
    }
    TaskOutcome out = solve_task(*task, o.cfg, true);
    std::cout << out.log_text;
    if (!o.log_path.empty()) std::ofstream(o.log_path) << out.log_text;
    if (!o.png_dir.empty()) write_pngs(*task, o.png_dir);
    return 0;
}

int cmd_describe(const std::string& path, const CommonOpts& o) {
    auto task = load_checked(path, o.domain);
    if (!task) {
        std::cerr << task.error << "\n";
        return 1;
    }
    const Domain& d = *task->domain;
    LearnResult lr = learn(d, task->train, o.cfg);
    NodePrinter p = d.printer();
    std::cout << "input:  " << p(lr.model.input) << "\n";
    std::cout << "output: " << p(lr.model.output) << "\n";
    for (size_t e = 0; e < task->train.size(); ++e) {
        auto joints = describe(d, lr.model, task->train[e], o.cfg.parse_limit, 3);
        std::cout << "example " << e << ":\n";
        for (const auto& j : joints) {
            std::cout << "  rho=(" << j.rank_in << "," << j.rank_out << ") total="
                      << j.total() << "\n";
            std::cout << "  pi_in:  " << p(j.desc_in) << "\n";
            std::cout << "  pi_out: " << p(j.desc_out) << "\n";
        }
    }
    return 0;
}

int cmd_create(const std::string& path, const CommonOpts& o) {
    auto task = load_checked(path, o.domain);
    if (!task) {
        std::cerr << task.error << "\n";
        return 1;
    }
    const Domain& d = *task->domain;
    LearnResult lr = learn(d, task->train, o.cfg);
    auto pair = create(d, lr.model, o.cfg.seed, o.cfg.parse_limit);
    if (!pair) {
        std::cerr << "create failed: " << pair.error << "\n";
        return 1;
    }
    std::cout << "input:\n" << d.datum_to_text(pair->input);
    std::cout << "output:\n" << d.datum_to_text(pair->output);
    std::cout << "{\"input\": " << datum_to_json(pair->input)
              << ", \"output\": " << datum_to_json(pair->output) << "}\n";
    return 0;
}

int cmd_bench(const std::string& dir, const CommonOpts& o) {
    BenchReport rep = run_benchmark(dir, o.cfg, o.jobs, o.log_path, o.png_dir);
    std::cout << rep.aggregate_json_with_timing() << "\n";
    std::cerr << rep.summary_text();
    return 0;
}

int cmd_render(const std::string& path, const CommonOpts& o) {
    auto task = load_checked(path, o.domain);
    if (!task) {
        std::cerr << task.error << "\n";
        return 1;
    }
    const Domain& d = *task->domain;
    for (size_t i = 0; i < task->train.size(); ++i) {
        std::cout << "train[" << i << "] input:\n" << d.datum_to_text(task->train[i].input);
        std::cout << "train[" << i << "] output:\n" << d.datum_to_text(task->train[i].output);
    }
    for (size_t i = 0; i < task->test.size(); ++i) {
        std::cout << "test[" << i << "] input:\n" << d.datum_to_text(task->test[i].input);
        std::cout << "test[" << i << "] output:\n" << d.datum_to_text(task->test[i].output);
    }
    if (!o.png_dir.empty()) write_pngs(*task, o.png_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MDL-guided object-centric model induction for grid and string tasks"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string path;

    auto* solve = app.add_subcommand("solve", "learn, prune and predict one task");
    solve->add_option("task", path, "task JSON file")->required();
    add_common(solve, o);

    auto* desc = app.add_subcommand("describe", "print the best joint descriptions");
    desc->add_option("task", path, "task JSON file")->required();
    add_common(desc, o);

    auto* create = app.add_subcommand("create", "learn a model, then emit a new example pair");
    create->add_option("task", path, "task JSON file")->required();
    add_common(create, o);

    auto* bench = app.add_subcommand("bench", "run a directory of tasks");
    bench->add_option("dir", path, "directory of task JSON files")->required();
    add_common(bench, o);

    auto* render = app.add_subcommand("render", "print task grids (ASCII, optionally PNG)");
    render->add_option("task", path, "task JSON file")->required();
    add_common(render, o);

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return cmd_solve(path, o);
    if (desc->parsed()) return cmd_describe(path, o);
    if (create->parsed()) return cmd_create(path, o);
    if (bench->parsed()) return cmd_bench(path, o);
    if (render->parsed()) return cmd_render(path, o);
    return 1;
}
