#include "linger/monitor.hpp"

#include <algorithm>
#include <cmath>

namespace linger {

Monitor::Monitor(const Problem& p, const GradMeter& meter, MonitorOptions opt)
    : p_(p), meter_(meter), opt_(std::move(opt)), start_(std::chrono::steady_clock::now()) {
    double units = std::ceil(opt_.checkpoint_passes * static_cast<double>(p.n()));
    interval_ = static_cast<std::uint64_t>(std::max(1.0, units));
    next_ = meter_.calls() + interval_;
}

void Monitor::tick(std::span<const double> x, std::optional<std::int64_t> live) {
    if (meter_.calls() < next_) return;
    emit(x, live);
}

void Monitor::emit(std::span<const double> x, std::optional<std::int64_t> live) {
    auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.pass_count = meter_.passes();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t0 - start_).count() - excluded_ms_;
    rec.objective = full_objective(p_, x);
    if (opt_.primal) rec.primal_error = opt_.primal(x);
    rec.live_count = live;
    records_.push_back(rec);
    if (opt_.keep_points) points_.emplace_back(x.begin(), x.end());
    last_calls_ = meter_.calls();
    while (next_ <= meter_.calls()) next_ += interval_;
    excluded_ms_ += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void Monitor::finish(std::span<const double> x, std::optional<std::int64_t> live) {
    if (last_calls_ != meter_.calls()) emit(x, live);
}

void apply_reference(std::vector<RunRecord>& records, double f_star, bool relative) {
    const double scale = relative ? std::abs(f_star) : 1.0;
    for (auto& r : records) r.objective_error = (r.objective - f_star) / scale;
}

void require_finite(std::span<const double> x, const char* where, std::uint64_t iteration) {
    if (!all_finite(x))
        throw SolverAbort(std::string(where) + ": non-finite iterate at iteration " +
                          std::to_string(iteration));
}

}  // namespace linger
