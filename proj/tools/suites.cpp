#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

#include "cli.hpp"
#include "linger/studies.hpp"
#include "linger/synthetic.hpp"

namespace linger::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void set_default(Config& cfg, const std::string& key, const std::string& value) {
    if (!cfg.has(key)) cfg.set(key, value);
}

json fit_json(const CurveFit& f) {
    return {{"points", f.points},
            {"r2_cube_root", f.cube_root.r2},
            {"r2_log_log", f.log_log.r2},
            {"slope_cube_root", f.cube_root.slope},
            {"slope_log_log", f.log_log.slope}};
}

// Tunes every method on one experiment and writes the selected curve of
// each. `score` ranks finished candidates (lower is better).
int tuned_comparison(const std::string& suite, Config cfg, const Common& c,
                     const std::vector<std::string>& methods, const std::string& grid_name,
                     const std::function<double(const RunResult&)>& score) {
    Experiment ex = build_experiment(cfg);
    const RunOptions ro = parse_run_options(cfg);
    const bool wall = cfg.flag("run.record_wall", true);
    const auto grid = cfg.has("tune.grid") ? parse_grid(cfg)
                                           : named_grid(grid_name, static_cast<int>(cfg.integer("tune.k_min", 1)),
                                                        static_cast<int>(cfg.integer("tune.k_max", 6)));
    fs::create_directories(c.out);
    const unsigned workers = std::max(1u, env_threads());

    std::vector<std::pair<std::string, TuneResult>> tuned;
    for (const auto& name : methods) {
        Config mc = cfg;
        mc.set("method.name", name);
        MethodSpec spec = parse_method_spec(mc);
        std::vector<double> g = spec.kind == MethodKind::pegasos ? std::vector<double>{1.0} : grid;
        std::cerr << suite << ": " << name << " over " << g.size() << " step sizes\n";
        tuned.emplace_back(name, tune(ex, spec, g, ro, workers));
    }

    const MethodSpec ref_spec = [&] {
        for (auto& [name, t] : tuned)
            if (name == "svrg_lin" && t.best) return t.candidates[*t.best].spec;
        MethodSpec s;
        s.eta = grid.back();
        return s;
    }();
    const std::string source = ensure_references(ex, cfg.real("reference.eta", ref_spec.eta),
                                                 cfg.real("reference.budget", 10.0 * ro.budget), ro.seed);
    std::vector<const RunResult*> all;
    for (auto& [name, t] : tuned)
        for (auto& r : t.candidates) all.push_back(&r);
    tighten_references(ex, all);

    json m;
    m["tool"] = "linger";
    m["version"] = kVersion;
    m["suite"] = suite;
    m["config"] = cfg.entries();
    m["config_hash"] = cfg.hash();
    m["problem_seed"] = cfg.integer("problem.seed", 1);
    m["pass_budget"] = ro.budget;
    m["checkpoint_passes"] = ro.checkpoint;
    m["grid"] = grid;
    m["reference"] = reference_entry(ex, source);
    m["runs"] = json::array();
    bool any = false;
    for (auto& [name, t] : tuned) {
        for (auto& r : t.candidates) apply_references(ex, r);
        std::optional<std::size_t> pick;
        for (std::size_t k = 0; k < t.candidates.size(); ++k) {
            const double s = score(t.candidates[k]);
            if (!std::isfinite(s)) continue;
            if (!pick || s < score(t.candidates[*pick])) pick = k;
        }
        if (!pick) {
            std::cerr << suite << ": every " << name << " candidate aborted\n";
            continue;
        }
        any = true;
        const RunResult& r = t.candidates[*pick];
        const std::string csv = name + ".csv";
        write_csv_file(c.out / csv, r.records, wall);
        m["runs"].push_back(run_entry(csv, r, ro.seed, cfg.hash()));
    }
    write_json(c.out / "manifest.json", m);
    return any ? 0 : 3;
}

double final_objective_score(const RunResult& r) { return r.final_objective(); }

double final_primal_score(const RunResult& r) {
    if (r.aborted || r.records.empty() || !r.records.back().primal_error) return INFINITY;
    return *r.records.back().primal_error;
}

int suite_rate_shape(Config cfg, const Common& c) {
    RateShapeOptions o;
    o.n = static_cast<std::size_t>(cfg.integer("problem.n", o.n));
    o.budget = cfg.real("run.budget", o.budget);
    const RateShapeResult r = rate_shape_study(o);
    const bool wall = cfg.flag("run.record_wall", true);
    fs::create_directories(c.out);
    write_csv_file(c.out / "gd_lin.csv", r.gdlin.records, wall);
    write_csv_file(c.out / "gd.csv", r.gd.records, wall);
    json m;
    m["tool"] = "linger";
    m["version"] = kVersion;
    m["suite"] = "gd-rate-shape";
    m["problem"] = {{"kind", "cubic-kink"}, {"n", o.n}, {"L", r.L}, {"x0", o.x0}};
    m["reference"] = {{"f_star", 0.0}, {"source", "closed form"}};
    m["error_window"] = {o.err_lo, o.err_hi};
    m["pass_budget"] = o.budget;
    m["runs"] = json::array({{{"csv", "gd_lin.csv"}, {"method", "gd_lin"}, {"mode", "theoretical"}, {"fit", fit_json(r.gdlin)}},
                             {{"csv", "gd.csv"}, {"method", "gd"}, {"eta", 1.0 / r.L}, {"fit", fit_json(r.gd)}}});
    write_json(c.out / "manifest.json", m);
    return 0;
}

int suite_b_profile(Config cfg, const Common& c) {
    set_default(cfg, "problem.kind", "lp");
    Experiment ex = build_experiment(cfg);
    if (!ex.lp) throw ConfigError("b-profile needs an lp problem");
    const LpReference ref = lp_newton_reference(ex.lp->instance());
    std::vector<double> radii = cfg.reals("profile.radii");
    if (radii.empty()) radii = log_radii(1e-6, 1.0, 40);
    const Vector origin(ex.problem->d(), 0.0);
    const auto at0 = profile_B(*ex.problem, origin, radii);
    const auto atopt = profile_B(*ex.problem, ref.x, radii);
    fs::create_directories(c.out);
    std::ofstream os(c.out / "profile.csv");
    os << "r,origin,near_optimum\n";
    char buf[128];
    for (std::size_t k = 0; k < radii.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", radii[k], at0[k], atopt[k]);
        os << buf;
    }
    json m;
    m["tool"] = "linger";
    m["version"] = kVersion;
    m["suite"] = "b-profile";
    m["config"] = cfg.entries();
    m["problem_seed"] = cfg.integer("problem.seed", 1);
    m["theta"] = ex.lp->instance().theta;
    m["reference"] = {{"f_star", ref.value}, {"opt", ref.dual_bound}, {"source", "projected newton"}};
    m["profile_csv"] = "profile.csv";
    write_json(c.out / "manifest.json", m);
    return 0;
}

int suite_gaussian(Config cfg, const Common& c) {
    fs::create_directories(c.out);
    json m;
    m["tool"] = "linger";
    m["version"] = kVersion;
    m["suite"] = "gaussian-theorem";
    m["fits"] = json::array();
    for (std::size_t n : {std::size_t{1000}, std::size_t{10000}}) {
        GaussianProfileOptions o;
        o.n = n;
        o.d = static_cast<std::size_t>(cfg.integer("problem.d", o.d));
        o.sigma = cfg.real("problem.sigma", o.sigma);
        o.kappa = cfg.real("problem.kappa", o.kappa);
        o.seed = cfg.integer("problem.seed", o.seed);
        o.eta = cfg.real("method.eta", o.eta);
        o.budget = cfg.real("run.budget", o.budget);
        const auto r = gaussian_profile_study(o);
        const std::string csv = "gaussian_n" + std::to_string(n) + ".csv";
        std::ofstream os(c.out / csv);
        os << "r";
        for (std::size_t k = 0; k < r.profiles.size(); ++k) os << ",point" << k;
        os << '\n';
        char buf[64];
        for (std::size_t q = 0; q < r.radii.size(); ++q) {
            std::snprintf(buf, sizeof buf, "%.17g", r.radii[q]);
            os << buf;
            for (const auto& prof : r.profiles) {
                std::snprintf(buf, sizeof buf, ",%.17g", prof[q]);
                os << buf;
            }
            os << '\n';
        }
        m["fits"].push_back({{"n", n}, {"d", o.d}, {"sigma", o.sigma}, {"kappa", o.kappa}, {"seed", o.seed},
                             {"eta", o.eta}, {"csv", csv}, {"c1", r.c1}, {"c2", r.c2}});
    }
    write_json(c.out / "manifest.json", m);
    return 0;
}

}  // namespace

int cmd_suite(const Common& c, const std::string& name) {
    Config cfg = load_config(c);
    if (name == "lp-convergence" || name == "lp-primal") {
        set_default(cfg, "problem.kind", "lp");
        set_default(cfg, "tune.k_min", "6");
        set_default(cfg, "tune.k_max", "10");
        return tuned_comparison(name, cfg, c, {"svrg_lin", "svrg", "saga", "scsg_lin", "scsg"}, "lp",
                                name == "lp-primal" ? final_primal_score : final_objective_score);
    }
    if (name == "svm-convergence") {
        set_default(cfg, "problem.kind", "svm");
        set_default(cfg, "problem.data", "data/adult.libsvm");
        if (!fs::exists(cfg.str("problem.data", "")))
            throw ConfigError("missing data file " + cfg.str("problem.data", ""));
        return tuned_comparison(name, cfg, c, {"svrg_lin", "svrg", "saga", "pegasos", "gd"}, "svm",
                                final_objective_score);
    }
    if (name == "gd-rate-shape") return suite_rate_shape(cfg, c);
    if (name == "b-profile") return suite_b_profile(cfg, c);
    if (name == "gaussian-theorem") return suite_gaussian(cfg, c);
    throw ConfigError("unknown suite '" + name + "'");
}

}  // namespace linger::cli
