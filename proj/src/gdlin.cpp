#include "linger/gdlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "linger/kernels.hpp"
#include "linger/lowbit.hpp"

namespace linger {

namespace {

// Ceiling that ignores rounding noise, so 100 * 1.1 gives 110 rather than 111.
double ceil_exact(double v) { return std::ceil(v * (1.0 - 1e-12)); }

}  // namespace

std::uint64_t m_schedule(const GdLinConfig& cfg, std::size_t s) {
    const double sd = static_cast<double>(s);
    if (cfg.mode == GdLinMode::theoretical) {
        const double base = 1.0 + cfg.C * cfg.C / (16.0 * cfg.D * cfg.D);
        return static_cast<std::uint64_t>(ceil_exact(std::pow(base, sd)));
    }
    const double m = ceil_exact(100.0 * std::pow(1.1, sd));
    return static_cast<std::uint64_t>(std::min(1000.0, m));
}

Vector truncated_gd_step(std::span<const double> x, std::span<const double> g, double xi, double L) {
    Vector out(x.begin(), x.end());
    const double gn = norm(g, NormKind::euclidean);
    if (gn == 0.0) return out;
    axpy(-std::min(xi / gn, 1.0 / L), g, out);
    return out;
}

std::vector<Vector> run_truncated_gd(const Problem& p, const Vector& x0, std::size_t m, double xi,
                                     double L) {
    std::vector<Vector> path{x0};
    for (std::size_t k = 0; k < m; ++k) {
        Vector g = exact_gradient(p, path.back());
        path.push_back(truncated_gd_step(path.back(), g, xi, L));
    }
    return path;
}

namespace {

double resolve_L(const Problem& p, const GdLinConfig& cfg) {
    if (cfg.L > 0.0) return cfg.L;
    if (auto L = p.smoothness()) return *L;
    return 0.0;
}

// One full gradient at x, billed one pass.
Vector full_gradient(const Problem& p, std::span<const double> x, GradMeter& meter) {
    std::vector<std::uint32_t> all(p.n());
    std::iota(all.begin(), all.end(), 0u);
    Vector g(p.d());
    kernels::gradient_pass(p, x, all, nullptr, nullptr, g);
    for (double& v : g) v /= static_cast<double>(p.n());
    p.add_shared_gradient(x, g);
    meter.bill(p.n());
    return g;
}

}  // namespace

Vector run_gdlin(const Problem& p, const GdLinConfig& cfg, GradMeter& meter, Monitor& monitor,
                 std::vector<GdLinEpoch>* epochs) {
    const std::size_t n = p.n(), d = p.d();
    const double L = resolve_L(p, cfg);
    const bool theory = cfg.mode == GdLinMode::theoretical;
    if (theory) {
        if (!(L > 0.0)) throw std::invalid_argument("gd_lin theoretical mode needs L > 0");
        if (!(cfg.C > 0.0 && cfg.C <= cfg.D))
            throw std::invalid_argument("gd_lin theoretical mode needs 0 < C <= D");
    }

    Vector x = cfg.x0.empty() ? Vector(d, 0.0) : cfg.x0;
    check_dimension(p, x);
    project_inplace(p, x);
    monitor.emit(x);
    std::uint64_t iter = 0;

    if (!theory) {
        const double eta = cfg.warmup_eta > 0.0 ? cfg.warmup_eta : (L > 0.0 ? 1.0 / L : cfg.C);
        for (std::size_t t = 0; t < cfg.warmup_steps && !monitor.exhausted() && monitor.affordable(n); ++t) {
            Vector g = full_gradient(p, x, meter);
            axpy(-eta, g, x);
            project_inplace(p, x);
            require_finite(x, "gd_lin warmup", ++iter);
            monitor.step(x);
            monitor.tick(x);
        }
    }

    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    Vector rows, radii, g(d);

    const std::size_t first = theory ? 1 : 0;
    for (std::size_t s = first; s < first + cfg.S && !monitor.exhausted() && monitor.affordable(n); ++s) {
        GdLinEpoch ep;
        ep.m = m_schedule(cfg, s);
        ep.xi = cfg.C / static_cast<double>(ep.m);
        const std::uint64_t start_calls = meter.calls();

        IndexSchedule sched(n, ep.xi);
        LingeringCache cache(n, d);
        {
            Vector r(n), sum(d);
            kernels::gradient_pass(p, x, all, cache.data(), r.data(), sum);
            meter.bill(n);
            cache.recompute();
            sched.add(0, all, std::vector<double>(r.begin(), r.end()));
        }

        for (std::uint64_t k = 0; k < ep.m; ++k) {
            if (k >= 1) {
                std::vector<std::uint32_t> lam = sched.index_set(k);
                if (!monitor.affordable(lam.size())) break;
                rows.resize(lam.size() * d);
                radii.resize(lam.size());
                kernels::gradient_rows(p, x, lam, rows.data(), radii.data());
                for (std::size_t q = 0; q < lam.size(); ++q)
                    cache.update(lam[q], std::span<const double>(rows.data() + q * d, d));
                meter.bill(lam.size());
                ep.max_retained = std::max(ep.max_retained, sched.retained());
                sched.add(k, std::move(lam), std::vector<double>(radii.begin(), radii.end()));
            }
            sched.release(k + 1);

            std::copy(cache.aggregate().begin(), cache.aggregate().end(), g.begin());
            p.add_shared_gradient(x, g);
            if (cfg.audit) cfg.audit(s, k, x, g);
            const double gn = norm(g, NormKind::euclidean);
            if (gn == 0.0) break;

            const double factor = theory ? std::min(ep.xi / gn, 1.0 / L) : ep.xi / gn;
            Vector prev = x;
            axpy(-factor, g, x);
            project_inplace(p, x);
            require_finite(x, "gd_lin", ++iter);
            ep.travel += distance(prev, x, p.norm_kind());
            ++ep.iterations;
            monitor.step(x);
            if (monitor.exhausted()) break;
        }
        ep.drift = cache.recompute();
        ep.billed_passes = static_cast<double>(meter.calls() - start_calls) / static_cast<double>(n);
        monitor.emit(x);
        if (epochs) epochs->push_back(ep);
    }
    monitor.finish(x);
    return x;
}

}  // namespace linger
