// ctlab: command-line front end for the experiment suites.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "ctlab/render.hpp"
#include "ctlab/report.hpp"

namespace fs = std::filesystem;
using namespace ctlab;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> cache;
    std::optional<int> jobs;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "seed for every suite run");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--cache", c.cache, "ball and model cache directory");
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const Common& c) {
    ExperimentConfig cfg = c.config.empty() ? default_config() : load_config(c.config);
    if (c.out) cfg.output = *c.out;
    if (c.cache) cfg.cache = *c.cache;
    if (c.jobs) cfg.jobs = *c.jobs;
    return cfg;
}

// Restricts the run to `only` (all configured suites when empty), applying --seed.
ExperimentConfig select(ExperimentConfig cfg, const Common& c, const std::string& only) {
    if (!only.empty()) {
        SuiteConfig s = cfg.suite(only);
        cfg.suites = {s};
    } else if (cfg.suites.empty()) {
        for (const auto& name : known_suites()) cfg.suites.push_back(cfg.suite(name));
    }
    if (c.seed) {
        for (auto& s : cfg.suites) s.seed = *c.seed;
    }
    return cfg;
}

int report(const RunOutcome& outcome) {
    if (!outcome.error.empty()) std::cerr << "error: " << outcome.error << '\n';
    return outcome.exit_code;
}

struct RenderArgs {
    std::string what = "ball";
    std::string layers = "ball_edges";
    std::string curve = "a";
    std::optional<std::string> from, to;
    std::string file;
    bool timestamp = false;
};

int render(const Common& c, const RenderArgs& r) {
    const ExperimentConfig cfg = resolve(c);
    const SuiteConfig lad = cfg.suite("ladder");
    RenderOptions opt;
    opt.layers = parse_layers(r.layers);
    opt.curve = CurveClass::parse(r.curve);
    opt.from = r.from.value_or(lad.from);
    opt.to = r.to.value_or(lad.to);
    opt.timestamp = r.timestamp;
    const CayleyBall ball = CayleyBall::load_or_build(cfg.cache, cfg.ball);
    std::string svg;
    if (r.what == "ball") {
        svg = render_ball(ball, opt);
    } else {
        if (cfg.stack.empty()) throw ConfigError("stack is empty");
        const auto m = ModelManifold::load_or_build(ball, cfg.stack, cfg.cache, cfg.jobs);
        const Ladder L = build_ladder(m, geodesic(ball, ball.at(opt.from), ball.at(opt.to)));
        svg = render_ladder(m, L, opt);
    }
    const fs::path file = r.file.empty() ? cfg.output / ("render_" + r.what + ".svg") : fs::path(r.file);
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream(file, std::ios::binary) << svg;
    std::cout << file.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cannon-Thurston lab for the genus-2 surface group"};
    app.require_subcommand(1);
    Common common;
    std::string chosen;

    const std::vector<std::pair<std::string, std::string>> suite_commands = {
        {"build-ball", "ball"},       {"electrify", "electro"},   {"twist-sweep", "twist"},
        {"blocks-build", "blocks"},   {"ladder", "ladder"},       {"retract-sweep", "retract"},
        {"ct-curve", "ct"},           {"audit", "audit"},
    };
    for (const auto& [cmd, suite] : suite_commands) {
        auto* sub = app.add_subcommand(cmd, "run the " + suite + " suite");
        add_common(sub, common);
        sub->callback([&chosen, s = suite] { chosen = s; });
    }
    auto* all = app.add_subcommand("run-all", "run every suite listed in the config (all suites if none)");
    add_common(all, common);

    RenderArgs rargs;
    auto* rend = app.add_subcommand("render", "write an SVG of the ball or of a ladder");
    add_common(rend, common);
    rend->add_option("--what", rargs.what, "ball or ladder")->check(CLI::IsMember({"ball", "ladder"}));
    rend->add_option("--layers", rargs.layers, "comma-separated layers");
    rend->add_option("--curve", rargs.curve, "curve class for electric layers (a or c)");
    rend->add_option("--from", rargs.from, "path start word");
    rend->add_option("--to", rargs.to, "path end word");
    rend->add_option("--file", rargs.file, "output SVG (default OUT/render_WHAT.svg)");
    rend->add_flag("--timestamp", rargs.timestamp, "embed the generation time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (rend->parsed()) return render(common, rargs);
        const auto cfg = select(resolve(common), common, all->parsed() ? std::string() : chosen);
        return report(run_experiment(cfg, &std::cerr));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
