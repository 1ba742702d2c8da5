#pragma once

// Small instances and independent oracles shared by the test programs.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "linger/lp.hpp"
#include "linger/problem.hpp"
#include "linger/svm.hpp"
#include "linger/synthetic.hpp"

namespace testing {

using linger::Vector;

inline Vector random_vector(std::mt19937_64& rng, std::size_t d, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(d);
    for (double& e : v) e = u(rng);
    return v;
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

inline double rel_diff(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        num = std::max(num, std::abs(a[j] - b[j]));
        den = std::max(den, std::max(std::abs(a[j]), std::abs(b[j])));
    }
    return den == 0.0 ? num : num / den;
}

// |a - b|_inf relative to max(|b|_inf, (1/n) sum_i |grad f_i(x)|_inf). The
// floor keeps the measure meaningful where the full gradient cancels to
// rounding level.
inline double rel_to_scale(const linger::Problem& p, std::span<const double> x,
                           std::span<const double> a, std::span<const double> b) {
    double scale = max_abs(b), comp = 0.0;
    Vector g(p.d());
    for (std::size_t i = 0; i < p.n(); ++i) {
        p.data_gradient(i, x, g);
        p.add_shared_gradient(x, g);
        comp += max_abs(g);
    }
    scale = std::max(scale, comp / static_cast<double>(p.n()));
    double num = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) num = std::max(num, std::abs(a[j] - b[j]));
    return scale == 0.0 ? num : num / scale;
}

// Random convex quadratic with n components; L from an eigen-solve.
inline std::shared_ptr<linger::QuadraticProblem> random_quadratic(std::size_t n, std::size_t d,
                                                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Vector M = random_vector(rng, d * d);
    for (std::size_t j = 0; j < d; ++j) M[j * d + j] += 1.5;
    Vector c = random_vector(rng, n * d, -2.0, 2.0);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Mm(
        M.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Eigen::MatrixXd H = Mm.transpose() * Mm;
    const double L = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues().maxCoeff();
    return std::make_shared<linger::QuadraticProblem>(n, d, M, c, L);
}

// f_i(x) = <a_i, x>: constant gradients, infinite radii.
class LinearProblem final : public linger::Problem {
public:
    LinearProblem(std::size_t n, std::size_t d, std::uint64_t seed) : n_(n), d_(d) {
        std::mt19937_64 rng(seed);
        a_ = random_vector(rng, n * d);
    }
    std::string name() const override { return "linear"; }
    std::size_t n() const override { return n_; }
    std::size_t d() const override { return d_; }
    std::optional<double> smoothness() const override { return 1.0; }
    double value(std::size_t i, std::span<const double> x) const override {
        return linger::dot(std::span<const double>(a_.data() + i * d_, d_), x);
    }
    double data_gradient(std::size_t i, std::span<const double>, std::span<double> g) const override {
        std::copy_n(a_.data() + i * d_, d_, g.begin());
        return linger::kInf;
    }

private:
    std::size_t n_, d_;
    Vector a_;
};

// The one-customer, two-resource instance used by several examples.
inline linger::LpInstance toy_lp() {
    linger::LpInstance in;
    in.n = 1;
    in.d = 2;
    in.p = {1.0, 0.5};
    in.pbar = {1.0};
    in.r = {1.0, 0.5};
    in.b = {0.3, 0.2};
    in.mu = 0.01;
    in.theta = 5.0;
    return in;
}

// Random sparse-ish classification data.
inline linger::SvmDataset random_svm(std::size_t n, std::size_t d, std::uint64_t seed, double fill = 0.5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), coin(0.0, 1.0);
    linger::SvmDataset ds;
    ds.d = d;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<std::uint32_t, double>> e;
        for (std::uint32_t j = 0; j < d; ++j)
            if (coin(rng) < fill) e.emplace_back(j, u(rng));
        if (e.empty()) e.emplace_back(0, 1.0);
        ds.add_row(coin(rng) < 0.5 ? -1.0 : 1.0, e);
    }
    return ds;
}

// Central differences of the full objective.
inline Vector fd_gradient(const linger::Problem& p, std::span<const double> x, double h) {
    Vector g(x.size()), y(x.begin(), x.end());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double keep = y[j];
        y[j] = keep + h;
        const double up = linger::full_objective(p, y);
        y[j] = keep - h;
        const double down = linger::full_objective(p, y);
        y[j] = keep;
        g[j] = (up - down) / (2.0 * h);
    }
    return g;
}

// Random unit direction in the given norm.
inline Vector unit_direction(std::mt19937_64& rng, std::size_t d, linger::NormKind kind) {
    for (;;) {
        Vector u = random_vector(rng, d);
        const double nu = linger::norm(u, kind);
        if (nu > 1e-3) {
            for (double& e : u) e /= nu;
            return u;
        }
    }
}

}  // namespace testing
