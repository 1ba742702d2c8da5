#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "linger/meter.hpp"
#include "linger/problem.hpp"

namespace linger {

struct RunRecord {
    double pass_count = 0.0;
    double wall_ms = 0.0;
    double objective = 0.0;
    double objective_error = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> primal_error;
    std::optional<std::int64_t> live_count;
};

// Thrown by a solver whose iterate stops being finite.
class SolverAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MonitorOptions {
    double pass_budget = 30.0;
    // Records are taken every checkpoint_passes * n billed units.
    double checkpoint_passes = 0.25;
    // Optional primal error at x (LP only).
    std::function<double(std::span<const double>)> primal;
    bool keep_points = false;
    // Called after every solver step with the new iterate; for tests.
    std::function<void(std::span<const double>)> on_step;
};

// Budget enforcement and checkpoint records for one run. Time spent
// evaluating records is excluded from wall_ms.
class Monitor {
public:
    Monitor(const Problem& p, const GradMeter& meter, MonitorOptions opt = {});

    bool exhausted() const { return meter_.passes() >= opt_.pass_budget; }
    // Whether billing `units` more keeps the run within the budget plus
    // one checkpoint interval. Solvers ask before every bulk evaluation.
    bool affordable(std::uint64_t units) const {
        return static_cast<double>(meter_.calls() + units) <=
               (opt_.pass_budget + opt_.checkpoint_passes) * static_cast<double>(meter_.n());
    }

    // Records x if the meter crossed a checkpoint boundary since the last record.
    void tick(std::span<const double> x, std::optional<std::int64_t> live = std::nullopt);
    // Records x unconditionally.
    void emit(std::span<const double> x, std::optional<std::int64_t> live = std::nullopt);
    // Records x unless the latest record already sits at the current meter count.
    void finish(std::span<const double> x, std::optional<std::int64_t> live = std::nullopt);

    void step(std::span<const double> x) const {
        if (opt_.on_step) opt_.on_step(x);
    }

    const std::vector<RunRecord>& records() const { return records_; }
    const std::vector<Vector>& points() const { return points_; }
    const MonitorOptions& options() const { return opt_; }

private:
    const Problem& p_;
    const GradMeter& meter_;
    MonitorOptions opt_;
    std::uint64_t interval_;
    std::uint64_t next_;
    std::uint64_t last_calls_ = std::numeric_limits<std::uint64_t>::max();
    std::chrono::steady_clock::time_point start_;
    double excluded_ms_ = 0.0;
    std::vector<RunRecord> records_;
    std::vector<Vector> points_;
};

// Fills objective_error from a reference optimum f*. With relative set the
// error is (f - f*) / |f*|.
void apply_reference(std::vector<RunRecord>& records, double f_star, bool relative);

void require_finite(std::span<const double> x, const char* where, std::uint64_t iteration);

}  // namespace linger
