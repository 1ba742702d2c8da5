#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linger/problem.hpp"

namespace linger {

// f_i(x) = 0.5 ||M (x - c_i)||^2. The minimizer is the mean center, so x*
// and f* are known in closed form. Radii are zero.
class QuadraticProblem final : public Problem {
public:
    // M is d x d row-major, centers n x d row-major; L is the largest
    // eigenvalue of M^T M (supplied by the caller).
    QuadraticProblem(std::size_t n, std::size_t d, Vector M, Vector centers, double L);

    std::string name() const override { return "quadratic"; }
    std::size_t n() const override { return n_; }
    std::size_t d() const override { return d_; }
    std::optional<double> smoothness() const override { return L_; }

    double value(std::size_t i, std::span<const double> x) const override;
    double data_gradient(std::size_t i, std::span<const double> x,
                         std::span<double> g) const override;

    const Vector& minimizer() const { return xstar_; }
    double optimum() const;
    const Vector& hessian() const { return H_; }

private:
    std::size_t n_, d_;
    Vector M_, H_, c_, xstar_;
    double L_;
};

// Separable Huber kinks: f_i(x) = sum_j [H_w(x_j - c_ij) - H_w(c_ij)] with
// H_w(t) = t^2/(2w) for |t| <= w and |t| - w/2 beyond, w = w_i. The data
// gradient is constant while every |x_j - c_ij| stays above w, so
//   delta(x, i) = min_j max(0, |x_j - c_ij| - w_i).
class KinkProblem final : public Problem {
public:
    KinkProblem(std::size_t n, std::size_t d, Vector centers, Vector widths,
                std::string label = "kink");

    std::string name() const override { return label_; }
    std::size_t n() const override { return n_; }
    std::size_t d() const override { return d_; }
    std::optional<double> smoothness() const override { return L_; }

    double value(std::size_t i, std::span<const double> x) const override;
    double data_gradient(std::size_t i, std::span<const double> x,
                         std::span<double> g) const override;
    double radius(std::size_t i, std::span<const double> x) const override;

    double center(std::size_t i, std::size_t j) const { return c_[i * d_ + j]; }
    double width(std::size_t i) const { return w_[i]; }

private:
    std::size_t n_, d_;
    Vector c_, w_;
    std::string label_;
    double L_;
};

// One-dimensional kinks at +-sqrt((k - 1/2) / h), k = 1..h, h = n/2 (density
// proportional to |c| on [-1, 1]), each with width equal to its local
// spacing. f is roughly |x|^3 / 3 with x* = 0 and f* = 0, and the fraction of
// components with radius below r is at most about 2r.
KinkProblem make_cubic_kinks(std::size_t n);

// Centers uniform on [-1, 1]^d, common width w.
KinkProblem make_uniform_kinks(std::size_t n, std::size_t d, double w, std::uint64_t seed);

// |B(x, r)| / n for each r: the fraction of components with radius < r.
std::vector<double> profile_B(const Problem& p, std::span<const double> x,
                              std::span<const double> rs);

struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
// Ordinary least squares y ~ slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace linger
