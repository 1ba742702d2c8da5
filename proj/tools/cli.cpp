#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "linger/kernels.hpp"
#include "linger/studies.hpp"
#include "linger/synthetic.hpp"

namespace linger::cli {

namespace fs = std::filesystem;
using nlohmann::json;

Config load_config(const Common& c) {
    Config cfg = c.config_path.empty() ? Config{} : Config::load(c.config_path);
    if (!c.data.empty()) cfg.set("problem.data", c.data);
    if (c.seed >= 0) cfg.set("run.seed", std::to_string(c.seed));
    if (c.budget > 0.0) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c.budget);
        cfg.set("run.budget", buf);
    }
    check_keys(cfg);
    return cfg;
}

void check_keys(const Config& cfg) {
    static const std::set<std::string> known = {
        "problem.kind", "problem.data", "problem.n", "problem.d", "problem.seed", "problem.mu",
        "problem.theta", "problem.lambda", "problem.rescale", "problem.middle_zone_radius",
        "problem.map_zero_label", "problem.sigma", "problem.kappa", "problem.mean_fraction",
        "problem.width", "method.name", "method.eta", "method.epochs", "method.mbar0",
        "method.min_epoch_len", "method.distance_exact_every", "method.epoch_len", "method.mode",
        "method.C", "method.D", "method.L", "method.warmup_steps", "method.warmup_eta",
        "run.budget", "run.seed", "run.checkpoint", "run.record_wall", "reference.f_star",
        "reference.opt", "reference.eta", "reference.budget", "tune.grid", "tune.k_min",
        "tune.k_max", "profile.radii", "profile.after_run"};
    cfg.require_known(known);
}

void write_csv_file(const fs::path& path, const std::vector<RunRecord>& records, bool record_wall) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    write_csv(os, records, record_wall);
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string eta_tag(double eta) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", eta);
    return buf;
}

json base_manifest(const std::string& command, const Config& cfg, const RunOptions& ro) {
    json m;
    m["tool"] = "linger";
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = cfg.entries();
    m["config_hash"] = cfg.hash();
    m["run_seed"] = ro.seed;
    m["problem_seed"] = cfg.integer("problem.seed", 1);
    m["pass_budget"] = ro.budget;
    m["checkpoint_passes"] = ro.checkpoint;
    m["threads"] = kernels::max_threads();
    return m;
}

void finish_errors(Experiment& ex, std::vector<RunResult*> runs) {
    std::vector<const RunResult*> view(runs.begin(), runs.end());
    tighten_references(ex, view);
    for (RunResult* r : runs) apply_references(ex, *r);
}

std::string prepare_references(Experiment& ex, const Config& cfg, const MethodSpec& spec,
                               const RunOptions& ro) {
    const double eta = cfg.real("reference.eta", spec.eta);
    const double budget = cfg.real("reference.budget", 10.0 * ro.budget);
    return ensure_references(ex, eta, budget, ro.seed);
}

}  // namespace

json run_entry(const std::string& csv, const RunResult& r, std::uint64_t seed, const std::string& hash) {
    json e;
    e["csv"] = csv;
    e["method"] = to_string(r.spec.kind);
    e["eta"] = r.spec.eta;
    e["seed"] = seed;
    e["config_hash"] = hash;
    e["aborted"] = r.aborted;
    if (r.aborted) e["abort_reason"] = r.abort_reason;
    if (!r.records.empty()) {
        e["final_pass"] = r.records.back().pass_count;
        e["final_obj_error"] = finite_or_null(r.records.back().objective_error);
        if (r.records.back().primal_error) e["final_primal_error"] = finite_or_null(*r.records.back().primal_error);
    }
    return e;
}

json reference_entry(const Experiment& ex, const std::string& source) {
    json j;
    j["source"] = source;
    j["f_star"] = ex.f_star ? json(*ex.f_star) : json(nullptr);
    if (ex.lp) j["opt"] = ex.opt ? json(*ex.opt) : json(nullptr);
    j["relative_error"] = ex.relative_error;
    return j;
}

int cmd_run(const Common& c) {
    const Config cfg = load_config(c);
    Experiment ex = build_experiment(cfg);
    const MethodSpec spec = parse_method_spec(cfg);
    const RunOptions ro = parse_run_options(cfg);
    const bool wall = cfg.flag("run.record_wall", true);
    fs::create_directories(c.out);

    RunResult r = run_method(ex, spec, ro);
    const std::string source = prepare_references(ex, cfg, spec, ro);
    finish_errors(ex, {&r});

    const std::string csv = to_string(spec.kind) + ".csv";
    write_csv_file(c.out / csv, r.records, wall);
    json m = base_manifest("run", cfg, ro);
    m["reference"] = reference_entry(ex, source);
    m["runs"] = json::array({run_entry(csv, r, ro.seed, cfg.hash())});
    write_json(c.out / "manifest.json", m);
    if (r.aborted) {
        std::cerr << "linger: solver aborted: " << r.abort_reason << '\n';
        return 3;
    }
    return 0;
}

int cmd_tune(const Common& c) {
    const Config cfg = load_config(c);
    Experiment ex = build_experiment(cfg);
    const MethodSpec spec = parse_method_spec(cfg);
    const RunOptions ro = parse_run_options(cfg);
    const auto grid = parse_grid(cfg);
    const bool wall = cfg.flag("run.record_wall", true);
    fs::create_directories(c.out);

    TuneResult t = tune(ex, spec, grid, ro, std::max(1u, env_threads()));
    if (!t.best) {
        std::cerr << "linger: every candidate aborted\n";
        return 3;
    }
    MethodSpec best_spec = spec;
    best_spec.eta = grid[*t.best];
    const std::string source = prepare_references(ex, cfg, best_spec, ro);
    std::vector<RunResult*> all;
    for (auto& r : t.candidates) all.push_back(&r);
    finish_errors(ex, all);

    json m = base_manifest("tune", cfg, ro);
    m["reference"] = reference_entry(ex, source);
    m["runs"] = json::array();
    std::ofstream summary(c.out / "tune.csv");
    summary << "eta,final_pass,final_obj_error,aborted,best\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const RunResult& r = t.candidates[k];
        const std::string csv = to_string(spec.kind) + "_eta" + eta_tag(grid[k]) + ".csv";
        write_csv_file(c.out / csv, r.records, wall);
        m["runs"].push_back(run_entry(csv, r, ro.seed, cfg.hash()));
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.17g,%.6f,%.17g,%d,%d\n", grid[k],
                      r.records.empty() ? 0.0 : r.records.back().pass_count,
                      r.records.empty() ? NAN : r.records.back().objective_error, r.aborted ? 1 : 0,
                      k == *t.best ? 1 : 0);
        summary << buf;
    }
    m["best_eta"] = grid[*t.best];
    write_json(c.out / "manifest.json", m);

    Config best = cfg;
    best.set("method.eta", eta_tag(grid[*t.best]));
    best.erase("tune.grid");
    best.erase("tune.k_min");
    best.erase("tune.k_max");
    std::cout << best.canonical();
    return 0;
}

int cmd_profile(const Common& c) {
    const Config cfg = load_config(c);
    Experiment ex = build_experiment(cfg);
    const Problem& p = *ex.problem;
    std::vector<double> radii = cfg.reals("profile.radii");
    if (radii.empty()) radii = log_radii(1e-6, 1.0, 25);
    fs::create_directories(c.out);

    Vector origin(p.d(), 0.0);
    std::vector<std::pair<std::string, Vector>> points = {{"origin", origin}};
    RunOptions ro = parse_run_options(cfg);
    if (cfg.flag("profile.after_run", false)) {
        RunResult r = run_method(ex, parse_method_spec(cfg), ro);
        if (r.aborted) {
            std::cerr << "linger: solver aborted: " << r.abort_reason << '\n';
            return 3;
        }
        points.emplace_back("final", r.x);
    }
    std::ofstream os(c.out / "profile.csv");
    os << "r";
    for (const auto& [name, x] : points) os << ',' << name;
    os << '\n';
    std::vector<std::vector<double>> cols;
    for (const auto& [name, x] : points) cols.push_back(profile_B(p, x, radii));
    char buf[64];
    for (std::size_t k = 0; k < radii.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", radii[k]);
        os << buf;
        for (const auto& col : cols) {
            std::snprintf(buf, sizeof buf, ",%.17g", col[k]);
            os << buf;
        }
        os << '\n';
    }
    json m = base_manifest("profile", cfg, ro);
    m["profile_csv"] = "profile.csv";
    write_json(c.out / "manifest.json", m);
    return 0;
}

}  // namespace linger::cli
