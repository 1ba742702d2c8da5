#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linger/problem.hpp"

namespace linger {

// Packing LP: customers i choose resource j with probability p_ij; resource
// j earns r_j per unit and holds b_j. Resource 0 is the overflow resource
// (capacity 2n, revenue 0.05).
struct LpInstance {
    std::size_t n = 0, d = 0;
    std::vector<double> p;     // n x d, row-major
    std::vector<double> pbar;  // row maxima
    std::vector<double> r, b;
    double mu = 1e-5;
    double theta = 5.0;
    std::uint64_t seed = 0;

    double prob(std::size_t i, std::size_t j) const { return p[i * d + j]; }
};

// p_ij = u_i v_j z_ij with u, v ~ U[0.2, 1], z ~ U[0.5, 1]; r_0 = 0.05,
// b_0 = 2n; r_j ~ U[0.05, 0.95] and b_j = 0.01 n / d otherwise.
LpInstance generate_lp(std::size_t n, std::size_t d, std::uint64_t seed);

// Text format: "n d mu theta seed", then a line of r, a line of b, then n
// lines of p. Values are printed with 17 significant digits.
void save_lp(const LpInstance& inst, const std::string& path);
LpInstance load_lp(const std::string& path);

// f_i(x) = mu n pbar_i log Z_i + <x, b>,
// Z_i = sum_j exp((r_j - x_j) p_ij / (pbar_i mu)), on x >= 0, with the
// infinity-norm radius
//   delta(x, i) = max(0, min_{j != j*} [a_j* - a_j - theta pbar_i mu] / (p_ij* + p_ij)),
// a_j = (r_j - x_j) p_ij and j* = argmax_j a_j.
class LpProblem final : public Problem {
public:
    explicit LpProblem(LpInstance inst);

    const LpInstance& instance() const { return inst_; }

    std::string name() const override { return "lp"; }
    std::size_t n() const override { return inst_.n; }
    std::size_t d() const override { return inst_.d; }
    NormKind norm_kind() const override { return NormKind::infinity; }
    Domain domain() const override { return Domain::nonnegative_orthant; }

    double value(std::size_t i, std::span<const double> x) const override;
    double data_gradient(std::size_t i, std::span<const double> x,
                         std::span<double> g) const override;
    double radius(std::size_t i, std::span<const double> x) const override;

private:
    LpInstance inst_;
};

// Softmax row y_i(x), y_ij proportional to exp((r_j - x_j) p_ij / (pbar_i mu)).
Vector primal_recover(const LpInstance& inst, std::span<const double> x, std::size_t i);

// sum_j r_j min(b_j, sum_i p_ij y_ij(x)).
double truncated_revenue(const LpInstance& inst, std::span<const double> x);

// [opt - truncated_revenue] / opt. Throws std::invalid_argument when opt <= 0.
double primal_error(const LpInstance& inst, std::span<const double> x, double opt);

// Unregularized dual sum_i max_j (r_j - x_j) p_ij + <x, b>; an upper bound on
// the LP optimum at every x >= 0.
double lp_dual_bound(const LpInstance& inst, std::span<const double> x);

}  // namespace linger

namespace linger {

// High-accuracy optimum of the regularized dual by a projected
// Levenberg-Marquardt Newton method on the d bid prices; each iteration
// forms the exact Hessian in one pass. Used as the reference F*.
struct LpReference {
    Vector x;
    double value = 0.0;        // F(x) = (1/n) sum_i f_i(x)
    double pg_norm = 0.0;      // infinity norm of the projected gradient
    double dual_bound = 0.0;   // lp_dual_bound(x), upper bound on OPT
    double revenue = 0.0;      // truncated_revenue(x), lower bound on OPT
    std::size_t iterations = 0;
};
LpReference lp_newton_reference(const LpInstance& inst, double pg_tol = 1e-10,
                                std::size_t max_iter = 3000, Vector x0 = {});

}  // namespace linger
