#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "linger/monitor.hpp"
#include "linger/synthetic.hpp"

namespace linger {

// GD^lin (theoretical schedule, C = D = |x0|) against GD at eta = 1/L on the
// cubic kink problem, where f* = 0. Each curve is fitted as log(error)
// against T^(1/3) and against log T over records with error in
// [err_lo, err_hi] and T >= 1.
struct RateShapeOptions {
    std::size_t n = 500000;
    double budget = 500.0;
    double x0 = 1.0;
    double err_lo = 1e-12, err_hi = 1e-1;
};

struct CurveFit {
    std::vector<RunRecord> records;
    std::size_t points = 0;  // records inside the window
    LineFit cube_root;       // log err ~ T^(1/3)
    LineFit log_log;         // log err ~ log T
};

struct RateShapeResult {
    double L = 0.0;
    CurveFit gdlin, gd;
};

RateShapeResult rate_shape_study(const RateShapeOptions& opt = {});
CurveFit fit_curve(std::vector<RunRecord> records, double err_lo, double err_hi);

// |B(x, r)| / n along an SVRG^lin trajectory on Gaussian SVM data, and the
// least-squares line frac ~ c1 r + c2 through all (r, frac) pairs taken at
// the trajectory points.
struct GaussianProfileOptions {
    std::size_t n = 1000, d = 20;
    double sigma = 1.0, kappa = 2.0;
    std::uint64_t seed = 1;
    double eta = 0.05;
    double budget = 20.0;
    std::size_t trajectory_points = 10;  // the last records of the run
    double r_max = 0.2;
    std::size_t r_steps = 20;
};

struct GaussianProfileResult {
    std::vector<double> radii;
    std::vector<std::vector<double>> profiles;  // per trajectory point
    double c1 = 0.0, c2 = 0.0;
    double final_objective = 0.0;
};

GaussianProfileResult gaussian_profile_study(const GaussianProfileOptions& opt);

// Log-spaced radii from r_lo to r_hi.
std::vector<double> log_radii(double r_lo, double r_hi, std::size_t count);

}  // namespace linger
