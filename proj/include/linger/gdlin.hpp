#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "linger/meter.hpp"
#include "linger/monitor.hpp"
#include "linger/problem.hpp"

namespace linger {

enum class GdLinMode { theoretical, practical };

struct GdLinConfig {
    GdLinMode mode = GdLinMode::practical;
    std::size_t S = 100;    // epoch count
    double C = 1.0;         // travel per epoch; the learning rate in practical mode
    double D = 1.0;         // bound on ||x0 - x*|| (theoretical)
    double L = 0.0;         // smoothness; 0 takes the problem's value
    std::size_t warmup_steps = 50;  // plain GD steps before the first epoch (practical)
    double warmup_eta = 0.0;        // 0 means 1/L when L is known, else C
    Vector x0;                      // empty means the origin
    // Called with (epoch, k, x_k, g) before every epoch step; for tests.
    std::function<void(std::size_t, std::uint64_t, std::span<const double>, std::span<const double>)> audit;
};

struct GdLinEpoch {
    std::uint64_t m = 0;          // scheduled iterations
    std::uint64_t iterations = 0;  // iterations run (fewer if g hit zero or the budget ran out)
    double xi = 0.0;
    double billed_passes = 0.0;
    double travel = 0.0;          // sum of step lengths in the problem norm
    std::size_t max_retained = 0;  // peak count of stored buckets while building some Lambda_k
    double drift = 0.0;           // largest aggregate correction at the epoch end
};

// m_s per mode: ceil((1 + C^2/(16 D^2))^s) or min(1000, ceil(100 * 1.1^s)).
std::uint64_t m_schedule(const GdLinConfig& cfg, std::size_t s);

// x - min(xi/||g||, 1/L) g; x itself when g == 0.
Vector truncated_gd_step(std::span<const double> x, std::span<const double> g, double xi, double L);

// m truncated GD steps with exact full gradients. Returns x_0..x_m. Unmetered.
std::vector<Vector> run_truncated_gd(const Problem& p, const Vector& x0, std::size_t m, double xi,
                                     double L);

// GD with lingering gradients. Theoretical mode runs epochs s = 1..S, practical
// mode runs the warmup then epochs s = 0..S-1, both until the pass budget is hit.
// A record is emitted at the end of every epoch.
Vector run_gdlin(const Problem& p, const GdLinConfig& cfg, GradMeter& meter, Monitor& monitor,
                 std::vector<GdLinEpoch>* epochs = nullptr);

}  // namespace linger
