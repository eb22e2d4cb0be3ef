#include "fstar/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int run_one(const std::string &name, const std::string &config_path, fstar::RunOptions &opts) {
    fstar::json cfg;
    try {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "error: cannot open config " << config_path << "\n";
            return 2;
        }
        cfg = fstar::json::parse(is);
    } catch (const std::exception &e) {
        std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
        return 2;
    }

    fstar::RunResult res;
    try {
        res = fstar::run_subcommand(name, cfg, opts);
    } catch (const fstar::ConfigError &e) {
        std::cerr << "config error at " << e.pointer << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    for (const fstar::CheckResult &c : res.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " margin=" << fstar::format_value(c.margin) << "\n";

    std::filesystem::create_directories(opts.out_dir);
    std::filesystem::path sp = opts.out_dir / (res.scenario_id + "_summary.json");
    std::ofstream(sp) << res.summary(opts.with_timings).dump(2) << "\n";
    std::cout << "summary: " << sp.string() << "\n";
    return res.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Dirichlet-cone calculus: product cones, marginals, harmonic interpolation"};
    app.require_subcommand(1);

    std::string config_path;
    fstar::RunOptions opts;
    std::string out_dir = "out";
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool serial = false;
    bool timings = false;

    const std::vector<std::string> names = {"check-product", "prekopa", "bm", "min-principle",
                                            "interp", "supconv", "example8", "props"};
    std::map<std::string, CLI::App *> subs;
    for (const std::string &n : names) {
        CLI::App *sub = app.add_subcommand(n);
        sub->add_option("--config", config_path, "scenario JSON")->required();
        sub->add_option("--seed", seed, "override the scenario RNG seed")->each([&](const std::string &) { have_seed = true; });
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--serial", serial, "run kernels on the serial reference path");
        sub->add_flag("--timings", timings, "include wall times in the summary (breaks byte-stability)");
        subs[n] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    for (const std::string &n : names) {
        if (!subs[n]->parsed()) continue;
        opts.out_dir = out_dir;
        opts.format = format;
        opts.seed_override = seed;
        opts.has_seed_override = have_seed;
        opts.with_timings = timings;
        if (serial) fstar::set_default_exec(fstar::Exec::Serial);
        opts.policy = fstar::default_exec();
        return run_one(n, config_path, opts);
    }
    return 2;
}
