#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "linger/kernels.hpp"

int main(int argc, char** argv) {
    using namespace linger;
    CLI::App app{"linger: lingering-gradient solvers and benchmarks"};
    app.require_subcommand(1);

    cli::Common common;
    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", common.config_path, "config file (key = value)");
        if (need_config) opt->required();
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--seed", common.seed, "run seed");
        sub->add_option("--budget", common.budget, "pass budget");
        sub->add_option("--data", common.data, "data file");
    };
    auto* run = app.add_subcommand("run", "run one method");
    add_common(run, true);
    auto* tune = app.add_subcommand("tune", "grid-search the learning rate");
    add_common(tune, true);
    auto* profile = app.add_subcommand("profile", "write |B(x,r)|/n curves");
    add_common(profile, true);
    auto* suite = app.add_subcommand("suite", "run a named experiment suite");
    std::string suite_name;
    suite->add_option("name", suite_name, "lp-convergence, lp-primal, svm-convergence, gd-rate-shape, b-profile, gaussian-theorem")
        ->required();
    add_common(suite, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (const unsigned t = env_threads(); t > 0) kernels::set_threads(static_cast<int>(t));
    try {
        if (*run) return cli::cmd_run(common);
        if (*tune) return cli::cmd_tune(common);
        if (*profile) return cli::cmd_profile(common);
        if (*suite) return cli::cmd_suite(common, suite_name);
    } catch (const ConfigError& e) {
        std::cerr << "linger: " << e.what() << '\n';
        return 2;
    } catch (const SolverAbort& e) {
        std::cerr << "linger: solver aborted: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "linger: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
