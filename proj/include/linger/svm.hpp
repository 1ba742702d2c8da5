#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "linger/problem.hpp"

namespace linger {

// Binary classification data in CSR form.
struct SvmDataset {
    std::size_t n = 0, d = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::uint32_t> col;
    std::vector<double> val;
    std::vector<double> labels;     // each -1 or +1
    std::vector<double> row_norms;  // Euclidean norm of each row
    double lambda = 0.0;            // 0 means 1/n
    double mu_smooth = 0.0;

    double margin(std::size_t i, std::span<const double> x) const;
    void add_row(double label, const std::vector<std::pair<std::uint32_t, double>>& entries);
};

struct ParseOptions {
    bool map_zero_label = false;  // accept 0 as -1
    std::size_t min_dim = 0;      // d = max(min_dim, largest index)
};

// Reads "<label> <idx>:<val> ..." lines with 1-based indices. Errors name the
// file and line.
SvmDataset parse_libsvm(const std::string& path, const ParseOptions& opt = {});
SvmDataset parse_libsvm_text(const std::string& text, const ParseOptions& opt = {},
                             const std::string& source = "<text>");

// Multiplies every row by n / sum_i ||a_i|| so the average norm is 1.
void rescale(SvmDataset& ds);

enum class MiddleZone { infinite, zero };

// f_i(x) = (lambda/2)||x||^2 + h(b_i <x, a_i>) with the smoothed hinge
//   h(m) = 0 for m >= 1, (1 - m) - mu/2 for m <= 1 - mu, (1 - m)^2 / (2 mu) between.
// The ridge is the shared term, so radii cover the hinge part only:
//   (m - 1)/||a_i|| if m >= 1, (1 - mu - m)/||a_i|| if m <= 1 - mu, and the
// middle-zone setting otherwise. With mu = 0 the kink itself gets radius 0.
class SvmProblem final : public Problem {
public:
    explicit SvmProblem(std::shared_ptr<const SvmDataset> ds,
                        MiddleZone middle = MiddleZone::infinite);

    const SvmDataset& dataset() const { return *ds_; }
    double lambda() const { return lambda_; }

    std::string name() const override { return "svm"; }
    std::size_t n() const override { return ds_->n; }
    std::size_t d() const override { return ds_->d; }
    std::optional<double> strong_convexity() const override { return lambda_; }
    std::optional<double> smoothness() const override;

    double value(std::size_t i, std::span<const double> x) const override;
    double data_gradient(std::size_t i, std::span<const double> x,
                         std::span<double> g) const override;
    double radius(std::size_t i, std::span<const double> x) const override;

    bool has_shared() const override { return lambda_ != 0.0; }
    void add_shared_gradient(std::span<const double> x, std::span<double> g) const override;

    double hinge(double m) const;
    double hinge_slope(double m) const;  // dh/dm
    double radius_at_margin(std::size_t i, double m) const;

private:
    std::shared_ptr<const SvmDataset> ds_;
    MiddleZone middle_;
    double lambda_;
};

// Reference optimum by dual coordinate descent on
//   max sum_i (alpha_i - mu alpha_i^2 / (2C)) - ||sum_i alpha_i b_i a_i||^2 / 2,
//   0 <= alpha_i <= C = 1/(lambda n),
// stopping when the duality gap (in objective units) falls below gap_tol.
struct SvmReference {
    Vector x;
    double primal = 0.0;  // f(x)
    double dual = 0.0;    // lower bound on f*
    std::size_t epochs = 0;
};
SvmReference svm_dual_reference(const SvmProblem& p, double gap_tol = 1e-10,
                                std::size_t max_epochs = 5000, std::uint64_t seed = 7);

// Rows a_i ~ N(b_i u, (sigma^2/d) I) with random labels b_i and a fixed mean
// direction u of norm mean_fraction * kappa * sigma / sqrt(d).
struct GaussianSpec {
    std::size_t n = 1000, d = 20;
    double sigma = 1.0;
    double kappa = 1.0;
    double mean_fraction = 1.0;
    std::uint64_t seed = 1;
};
SvmDataset generate_gaussian(const GaussianSpec& spec);

}  // namespace linger
