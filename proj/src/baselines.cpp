#include "linger/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "linger/kernels.hpp"
#include "linger/rng.hpp"
#include "linger/svrglin.hpp"

namespace linger {

BaselineMethod parse_baseline(const std::string& name) {
    if (name == "gd") return BaselineMethod::gd;
    if (name == "svrg") return BaselineMethod::svrg;
    if (name == "saga") return BaselineMethod::saga;
    if (name == "scsg") return BaselineMethod::scsg;
    if (name == "pegasos") return BaselineMethod::pegasos;
    throw std::invalid_argument("unknown baseline method '" + name + "'");
}

std::string to_string(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::gd: return "gd";
        case BaselineMethod::svrg: return "svrg";
        case BaselineMethod::saga: return "saga";
        case BaselineMethod::scsg: return "scsg";
        case BaselineMethod::pegasos: return "pegasos";
    }
    return "?";
}

void SagaTable::set_mean(std::span<const double> sum) {
    for (std::size_t j = 0; j < d_; ++j) mean_[j] = sum[j] / static_cast<double>(n_);
}

void SagaTable::step(std::size_t i, std::span<const double> now, std::span<double> g) {
    const double inv = 1.0 / static_cast<double>(n_);
    double* r = rows_.data() + i * d_;
    for (std::size_t j = 0; j < d_; ++j) {
        g[j] = now[j] - r[j] + mean_[j];
        mean_[j] += (now[j] - r[j]) * inv;
        r[j] = now[j];
    }
}

namespace {

std::vector<std::uint32_t> iota_list(std::size_t n) {
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    return all;
}

bool budget_or_cap(const Monitor& monitor, const BaselineConfig& cfg, std::uint64_t steps) {
    return monitor.exhausted() || (cfg.max_steps > 0 && steps >= cfg.max_steps);
}

void run_gd(const Problem& p, const BaselineConfig& cfg, GradMeter& meter, Monitor& monitor,
            Vector& x) {
    const std::size_t n = p.n();
    const auto all = iota_list(n);
    Vector g(p.d());
    for (std::uint64_t t = 0; !budget_or_cap(monitor, cfg, t) && monitor.affordable(n); ++t) {
        kernels::gradient_pass(p, x, all, nullptr, nullptr, g);
        meter.bill(n);
        for (double& v : g) v /= static_cast<double>(n);
        p.add_shared_gradient(x, g);
        axpy(-cfg.eta, g, x);
        project_inplace(p, x);
        require_finite(x, "gd", t + 1);
        monitor.step(x);
        monitor.tick(x);
    }
}

// Same arithmetic and random draws as run_svrglin with every radius zero.
void run_svrg(const Problem& p, const BaselineConfig& cfg, GradMeter& meter, Monitor& monitor,
              Vector& x) {
    const std::size_t n = p.n(), d = p.d();
    const CounterRng rng(cfg.seed);
    const auto all = iota_list(n);
    const std::size_t len = cfg.epoch_len > 0 ? cfg.epoch_len : std::max<std::size_t>(2 * n, 16);
    std::vector<double> table(n * d);
    Vector full(d), fresh(d), now(d), g(d);
    std::uint64_t iter = 0;
    for (std::size_t s = 0; !budget_or_cap(monitor, cfg, iter) && monitor.affordable(n); ++s) {
        kernels::gradient_pass(p, x, all, table.data(), nullptr, fresh);
        meter.bill(n);
        for (std::size_t j = 0; j < d; ++j) full[j] = fresh[j] / static_cast<double>(n);
        const std::uint64_t stream = stream_id(kStreamInner, s);
        for (std::uint64_t k = 0; k < len; ++k) {
            const std::uint32_t i = all[rng.below(stream, k, n)];
            p.data_gradient(i, x, now);
            meter.bill(1);
            estimator(full, now, std::span<const double>(table.data() + i * d, d), 1.0, g);
            p.add_shared_gradient(x, g);
            axpy(-cfg.eta, g, x);
            project_inplace(p, x);
            require_finite(x, "svrg", ++iter);
            monitor.step(x);
            monitor.tick(x);
            if (budget_or_cap(monitor, cfg, iter)) return;
        }
    }
}

void run_scsg(const Problem& p, const BaselineConfig& cfg, GradMeter& meter, Monitor& monitor,
              Vector& x) {
    const std::size_t n = p.n(), d = p.d();
    const CounterRng rng(cfg.seed);
    const auto all = iota_list(n);
    Vector full(d), now(d), then(d), g(d), x0(d);
    std::uint64_t iter = 0;
    for (std::size_t s = 0; !budget_or_cap(monitor, cfg, iter); ++s) {
        const double cap = static_cast<double>(cfg.mbar0) * std::pow(2.0, static_cast<double>(s));
        const auto b = static_cast<std::size_t>(std::min(static_cast<double>(n), cap));
        auto batch = b < n ? sample_subset(cfg.seed, stream_id(kStreamBatch, s), all, b) : all;
        std::sort(batch.begin(), batch.end());
        if (!monitor.affordable(batch.size())) return;
        kernels::gradient_pass(p, x, batch, nullptr, nullptr, full);
        meter.bill(batch.size());
        for (double& v : full) v /= static_cast<double>(batch.size());
        x0 = x;
        const std::uint64_t stream = stream_id(kStreamInner, s);
        for (std::uint64_t k = 0; k < 2 * batch.size(); ++k) {
            const std::uint32_t i = all[rng.below(stream, k, n)];
            p.data_gradient(i, x, now);
            p.data_gradient(i, x0, then);
            meter.bill(2);
            estimator(full, now, then, 1.0, g);
            p.add_shared_gradient(x, g);
            axpy(-cfg.eta, g, x);
            project_inplace(p, x);
            require_finite(x, "scsg", ++iter);
            monitor.step(x);
            monitor.tick(x);
            if (budget_or_cap(monitor, cfg, iter)) return;
        }
    }
}

void run_saga(const Problem& p, const BaselineConfig& cfg, GradMeter& meter, Monitor& monitor,
              Vector& x) {
    const std::size_t n = p.n(), d = p.d();
    const CounterRng rng(cfg.seed);
    const auto all = iota_list(n);
    SagaTable table(n, d);
    Vector sum(d), now(d), g(d);
    if (!monitor.affordable(n)) return;
    kernels::gradient_pass(p, x, all, table.data(), nullptr, sum);
    meter.bill(n);
    table.set_mean(sum);
    const std::uint64_t stream = stream_id(kStreamInner, 0);
    for (std::uint64_t t = 0; !budget_or_cap(monitor, cfg, t);) {
        const std::uint32_t i = all[rng.below(stream, t, n)];
        p.data_gradient(i, x, now);
        meter.bill(1);
        table.step(i, now, g);
        p.add_shared_gradient(x, g);
        axpy(-cfg.eta, g, x);
        project_inplace(p, x);
        require_finite(x, "saga", ++t);
        monitor.step(x);
        monitor.tick(x);
    }
}

void run_pegasos(const Problem& p, const BaselineConfig& cfg, GradMeter& meter, Monitor& monitor,
                 Vector& x) {
    const std::size_t n = p.n(), d = p.d();
    double lambda = cfg.lambda;
    if (!(lambda > 0.0)) {
        auto sc = p.strong_convexity();
        if (!sc || !(*sc > 0.0)) throw std::invalid_argument("pegasos needs lambda > 0");
        lambda = *sc;
    }
    const CounterRng rng(cfg.seed);
    Vector g(d);
    const std::uint64_t stream = stream_id(kStreamInner, 0);
    for (std::uint64_t t = 1; !budget_or_cap(monitor, cfg, t - 1); ++t) {
        const std::size_t i = rng.below(stream, t, n);
        p.data_gradient(i, x, g);
        p.add_shared_gradient(x, g);
        meter.bill(1);
        axpy(-1.0 / (lambda * static_cast<double>(t)), g, x);
        project_inplace(p, x);
        require_finite(x, "pegasos", t);
        monitor.step(x);
        monitor.tick(x);
    }
}

}  // namespace

Vector run_baseline(const Problem& p, const BaselineConfig& cfg, GradMeter& meter, Monitor& monitor) {
    if (cfg.method != BaselineMethod::pegasos && !(cfg.eta > 0.0))
        throw std::invalid_argument(to_string(cfg.method) + " needs eta > 0");
    Vector x = cfg.x0.empty() ? Vector(p.d(), 0.0) : cfg.x0;
    check_dimension(p, x);
    project_inplace(p, x);
    monitor.emit(x);
    switch (cfg.method) {
        case BaselineMethod::gd: run_gd(p, cfg, meter, monitor, x); break;
        case BaselineMethod::svrg: run_svrg(p, cfg, meter, monitor, x); break;
        case BaselineMethod::saga: run_saga(p, cfg, meter, monitor, x); break;
        case BaselineMethod::scsg: run_scsg(p, cfg, meter, monitor, x); break;
        case BaselineMethod::pegasos: run_pegasos(p, cfg, meter, monitor, x); break;
    }
    monitor.finish(x);
    return x;
}

}  // namespace linger
