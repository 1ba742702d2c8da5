#include "linger/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "linger/baselines.hpp"
#include "linger/svrglin.hpp"
#include "linger/synthetic.hpp"

namespace linger {

namespace {

std::size_t to_size(std::uint64_t v) { return static_cast<std::size_t>(v); }

}  // namespace

Experiment build_experiment(const Config& cfg) {
    Experiment ex;
    ex.kind = cfg.str("problem.kind", "");
    ex.seed = cfg.integer("problem.seed", 1);
    if (ex.kind.empty()) throw ConfigError("problem.kind is required");
    try {
        if (ex.kind == "lp") {
            LpInstance inst;
            if (auto path = cfg.str("problem.data"))
                inst = load_lp(*path);
            else
                inst = generate_lp(to_size(cfg.integer("problem.n", 100000)),
                                   to_size(cfg.integer("problem.d", 50)), ex.seed);
            inst.mu = cfg.real("problem.mu", inst.mu);
            inst.theta = cfg.real("problem.theta", inst.theta);
            if (!(inst.mu > 0.0)) throw ConfigError("problem.mu must be positive for lp");
            ex.lp = std::make_shared<LpProblem>(std::move(inst));
            ex.problem = ex.lp;
            ex.relative_error = true;
        } else if (ex.kind == "svm" || ex.kind == "gaussian") {
            SvmDataset ds;
            if (ex.kind == "svm") {
                auto path = cfg.str("problem.data");
                if (!path) throw ConfigError("problem.data is required for svm");
                ParseOptions po;
                po.map_zero_label = cfg.flag("problem.map_zero_label", false);
                po.min_dim = to_size(cfg.integer("problem.d", 0));
                ds = parse_libsvm(*path, po);
            } else {
                GaussianSpec gs;
                gs.n = to_size(cfg.integer("problem.n", gs.n));
                gs.d = to_size(cfg.integer("problem.d", gs.d));
                gs.sigma = cfg.real("problem.sigma", gs.sigma);
                gs.kappa = cfg.real("problem.kappa", gs.kappa);
                gs.mean_fraction = cfg.real("problem.mean_fraction", gs.mean_fraction);
                gs.seed = ex.seed;
                ds = generate_gaussian(gs);
            }
            if (cfg.flag("problem.rescale", ex.kind == "svm")) rescale(ds);
            ds.lambda = cfg.real("problem.lambda", 0.0);
            ds.mu_smooth = cfg.real("problem.mu", 0.0);
            const std::string mz = cfg.str("problem.middle_zone_radius", "infinite");
            if (mz != "infinite" && mz != "zero")
                throw ConfigError("problem.middle_zone_radius must be infinite or zero");
            ex.svm = std::make_shared<SvmProblem>(std::make_shared<SvmDataset>(std::move(ds)),
                                                  mz == "zero" ? MiddleZone::zero : MiddleZone::infinite);
            ex.problem = ex.svm;
        } else if (ex.kind == "cubic-kink") {
            ex.problem = std::make_shared<KinkProblem>(make_cubic_kinks(to_size(cfg.integer("problem.n", 2000))));
            ex.f_star = 0.0;
        } else if (ex.kind == "uniform-kink") {
            ex.problem = std::make_shared<KinkProblem>(make_uniform_kinks(
                to_size(cfg.integer("problem.n", 2000)), to_size(cfg.integer("problem.d", 1)),
                cfg.real("problem.width", 0.01), ex.seed));
        } else {
            throw ConfigError("unknown problem.kind '" + ex.kind + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (auto f = cfg.real("reference.f_star")) ex.f_star = *f;
    if (auto o = cfg.real("reference.opt")) ex.opt = *o;
    return ex;
}

MethodKind parse_method(const std::string& name) {
    if (name == "gd_lin") return MethodKind::gd_lin;
    if (name == "svrg_lin") return MethodKind::svrg_lin;
    if (name == "scsg_lin") return MethodKind::scsg_lin;
    if (name == "gd") return MethodKind::gd;
    if (name == "svrg") return MethodKind::svrg;
    if (name == "saga") return MethodKind::saga;
    if (name == "scsg") return MethodKind::scsg;
    if (name == "pegasos") return MethodKind::pegasos;
    throw ConfigError("unknown method '" + name + "'");
}

std::string to_string(MethodKind m) {
    switch (m) {
        case MethodKind::gd_lin: return "gd_lin";
        case MethodKind::svrg_lin: return "svrg_lin";
        case MethodKind::scsg_lin: return "scsg_lin";
        case MethodKind::gd: return "gd";
        case MethodKind::svrg: return "svrg";
        case MethodKind::saga: return "saga";
        case MethodKind::scsg: return "scsg";
        case MethodKind::pegasos: return "pegasos";
    }
    return "?";
}

bool is_lingering(MethodKind m) {
    return m == MethodKind::gd_lin || m == MethodKind::svrg_lin || m == MethodKind::scsg_lin;
}

MethodSpec parse_method_spec(const Config& cfg) {
    MethodSpec m;
    m.kind = parse_method(cfg.str("method.name", "svrg_lin"));
    m.eta = cfg.real("method.eta", m.eta);
    m.epochs = to_size(cfg.integer("method.epochs", 0));
    m.mbar0 = to_size(cfg.integer("method.mbar0", m.mbar0));
    m.min_epoch_len = to_size(cfg.integer("method.min_epoch_len", m.min_epoch_len));
    m.distance_exact_every = to_size(cfg.integer("method.distance_exact_every", 0));
    m.epoch_len = to_size(cfg.integer("method.epoch_len", 0));
    const std::string mode = cfg.str("method.mode", "practical");
    if (mode != "practical" && mode != "theoretical")
        throw ConfigError("method.mode must be practical or theoretical");
    m.mode = mode == "theoretical" ? GdLinMode::theoretical : GdLinMode::practical;
    m.C = cfg.real("method.C");
    m.D = cfg.real("method.D");
    m.L = cfg.real("method.L");
    m.warmup_steps = to_size(cfg.integer("method.warmup_steps", m.warmup_steps));
    m.warmup_eta = cfg.real("method.warmup_eta", 0.0);
    if (!(m.eta > 0.0)) throw ConfigError("method.eta must be positive");
    return m;
}

RunOptions parse_run_options(const Config& cfg) {
    RunOptions o;
    o.budget = cfg.real("run.budget", o.budget);
    o.checkpoint = cfg.real("run.checkpoint", o.checkpoint);
    o.seed = cfg.integer("run.seed", o.seed);
    if (!(o.budget > 0.0)) throw ConfigError("run.budget must be positive");
    if (!(o.checkpoint > 0.0)) throw ConfigError("run.checkpoint must be positive");
    return o;
}

double RunResult::final_objective() const {
    if (aborted || records.empty()) return std::numeric_limits<double>::infinity();
    const double f = records.back().objective;
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
}

RunResult run_method(const Experiment& ex, const MethodSpec& spec, const RunOptions& opt) {
    const Problem& p = *ex.problem;
    RunResult out;
    out.spec = spec;
    GradMeter meter(p.n());
    MonitorOptions mo;
    mo.pass_budget = opt.budget;
    mo.checkpoint_passes = opt.checkpoint;
    mo.keep_points = opt.keep_points || ex.lp != nullptr;
    Monitor monitor(p, meter, mo);
    try {
        switch (spec.kind) {
            case MethodKind::gd_lin: {
                GdLinConfig c;
                c.mode = spec.mode;
                if (spec.epochs) c.S = spec.epochs;
                c.C = spec.C.value_or(spec.eta);
                c.D = spec.D.value_or(c.C);
                c.L = spec.L.value_or(0.0);
                c.warmup_steps = spec.warmup_steps;
                c.warmup_eta = spec.warmup_eta;
                out.x = run_gdlin(p, c, meter, monitor);
                break;
            }
            case MethodKind::svrg_lin:
            case MethodKind::scsg_lin: {
                SvrgLinConfig c;
                c.eta = spec.eta;
                if (spec.epochs) c.S = spec.epochs;
                c.variant = spec.kind == MethodKind::scsg_lin ? SvrgVariant::scsg_lin : SvrgVariant::svrg_lin;
                c.mbar0 = spec.mbar0;
                c.min_epoch_len = spec.min_epoch_len;
                c.distance_exact_every = spec.distance_exact_every;
                c.seed = opt.seed;
                out.x = run_svrglin(p, c, meter, monitor);
                break;
            }
            default: {
                BaselineConfig c;
                c.method = parse_baseline(to_string(spec.kind));
                c.eta = spec.eta;
                c.epoch_len = spec.epoch_len;
                c.mbar0 = spec.mbar0;
                c.seed = opt.seed;
                out.x = run_baseline(p, c, meter, monitor);
                break;
            }
        }
    } catch (const SolverAbort& e) {
        out.aborted = true;
        out.abort_reason = e.what();
    }
    out.records = monitor.records();
    out.points = monitor.points();
    apply_references(ex, out);
    return out;
}

void apply_references(const Experiment& ex, RunResult& r) {
    if (ex.f_star) apply_reference(r.records, *ex.f_star, ex.relative_error);
    if (ex.lp && ex.opt && r.points.size() == r.records.size())
        for (std::size_t k = 0; k < r.records.size(); ++k)
            r.records[k].primal_error = primal_error(ex.lp->instance(), r.points[k], *ex.opt);
}

std::vector<double> named_grid(const std::string& name, int k_min, int k_max) {
    std::vector<double> mult;
    if (name == "lp")
        mult = {5, 3, 1};
    else if (name == "svm")
        mult = {7.5, 5, 2.5, 1};
    else
        throw ConfigError("unknown grid '" + name + "'");
    if (k_min > k_max) throw ConfigError("empty grid range");
    std::vector<double> out;
    for (int k = k_min; k <= k_max; ++k)
        for (double m : mult) out.push_back(m / std::pow(10.0, k));
    return out;
}

std::vector<double> parse_grid(const Config& cfg) {
    const std::string g = cfg.str("tune.grid", "");
    if (g == "lp" || g == "svm")
        return named_grid(g, static_cast<int>(cfg.integer("tune.k_min", 1)),
                          static_cast<int>(cfg.integer("tune.k_max", 6)));
    auto v = cfg.reals("tune.grid");
    if (v.empty()) throw ConfigError("tune.grid must list at least one eta");
    for (double e : v)
        if (!(e > 0.0)) throw ConfigError("tune.grid values must be positive");
    return v;
}

TuneResult tune(const Experiment& ex, const MethodSpec& base, const std::vector<double>& grid,
                const RunOptions& opt, unsigned workers) {
    TuneResult out;
    out.candidates.resize(grid.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < grid.size();) {
            MethodSpec s = base;
            s.eta = grid[k];
            out.candidates[k] = run_method(ex, s, opt);
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.size())));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double f = out.candidates[k].final_objective();
        if (!std::isfinite(f)) continue;
        if (!out.best) {
            out.best = k;
            continue;
        }
        const double fb = out.candidates[*out.best].final_objective();
        if (f < fb || (f == fb && grid[k] < grid[*out.best])) out.best = k;
    }
    return out;
}

std::string ensure_references(Experiment& ex, double eta, double budget, std::uint64_t seed) {
    if (ex.f_star && (!ex.lp || ex.opt)) return "config";
    if (ex.lp) {
        LpReference ref = lp_newton_reference(ex.lp->instance());
        if (!ex.f_star) ex.f_star = ref.value;
        if (!ex.opt) ex.opt = ref.dual_bound;
        return "projected newton";
    }
    if (ex.svm) {
        SvmReference ref = svm_dual_reference(*ex.svm, 1e-10, 20000);
        ex.f_star = ref.primal;
        return "dual coordinate descent";
    }
    MethodSpec s;
    s.kind = MethodKind::svrg_lin;
    s.eta = eta;
    RunOptions o;
    o.budget = budget;
    o.seed = seed;
    o.checkpoint = 1.0;
    RunResult r = run_method(ex, s, o);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& rec : r.records) best = std::min(best, rec.objective);
    ex.f_star = best;
    return "svrg_lin long run";
}

void tighten_references(Experiment& ex, const std::vector<const RunResult*>& runs) {
    for (const RunResult* r : runs) {
        for (const auto& rec : r->records)
            if (std::isfinite(rec.objective) && (!ex.f_star || rec.objective < *ex.f_star))
                ex.f_star = rec.objective;
        if (ex.lp)
            for (const auto& x : r->points) {
                const double bound = lp_dual_bound(ex.lp->instance(), x);
                if (std::isfinite(bound) && (!ex.opt || bound < *ex.opt)) ex.opt = bound;
            }
    }
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records, bool record_wall) {
    os << "pass,wall_ms,obj_error,primal_error,live_count\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.6f,%.3f,%.17g,", r.pass_count, record_wall ? r.wall_ms : 0.0,
                      r.objective_error);
        os << buf;
        if (r.primal_error) {
            std::snprintf(buf, sizeof buf, "%.17g", *r.primal_error);
            os << buf;
        }
        os << ',';
        if (r.live_count) os << *r.live_count;
        os << '\n';
    }
}

unsigned env_threads() {
    const char* v = std::getenv("LINGER_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    const long t = std::strtol(v, &end, 10);
    if (*end != '\0' || t < 0) return 0;
    return static_cast<unsigned>(t);
}

}  // namespace linger
