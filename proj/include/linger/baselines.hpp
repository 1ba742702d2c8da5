#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linger/meter.hpp"
#include "linger/monitor.hpp"
#include "linger/problem.hpp"

namespace linger {

enum class BaselineMethod { gd, svrg, saga, scsg, pegasos };

BaselineMethod parse_baseline(const std::string& name);
std::string to_string(BaselineMethod m);

struct BaselineConfig {
    BaselineMethod method = BaselineMethod::svrg;
    double eta = 0.1;           // unused by pegasos
    std::size_t epoch_len = 0;  // svrg inner length; 0 means 2n
    std::size_t mbar0 = 100;    // scsg batch |S_s| = min(n, mbar0 * 2^s)
    double lambda = 0.0;        // pegasos; 0 takes the problem's strong convexity
    std::uint64_t seed = 1;
    std::size_t max_steps = 0;  // 0 means budget-limited only
    Vector x0;
};

// SAGA's stored gradients and their running mean.
class SagaTable {
public:
    SagaTable(std::size_t n, std::size_t d) : n_(n), d_(d), rows_(n * d, 0.0), mean_(d, 0.0) {}

    double* data() { return rows_.data(); }
    std::span<const double> row(std::size_t i) const { return {rows_.data() + i * d_, d_}; }
    std::span<const double> mean() const { return mean_; }
    void set_mean(std::span<const double> sum);

    // Writes now - g_i + mean into g, then replaces g_i by now.
    void step(std::size_t i, std::span<const double> now, std::span<double> g);

private:
    std::size_t n_, d_;
    std::vector<double> rows_;
    Vector mean_;
};

// Billing: gd one pass per step; svrg n per snapshot plus one unit per inner
// step; scsg |S| per snapshot plus two units per inner step; saga one pass
// to fill its table plus one unit per step; pegasos one unit per step.
Vector run_baseline(const Problem& p, const BaselineConfig& cfg, GradMeter& meter, Monitor& monitor);

}  // namespace linger
