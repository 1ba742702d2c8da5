#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "linger/meter.hpp"
#include "linger/vector.hpp"

namespace linger {

enum class Domain { unconstrained, nonnegative_orthant };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Default gradient-equality tolerance behind the lingering contract.
inline constexpr double kEqTol = 1e-10;

// Finite sum f(x) = (1/n) sum_i f_i(x).
//
// Each component gradient splits into a data part, which carries the
// lingering radius, and an optional shared term (e.g. a ridge) that every
// component has in common and that solvers recompute analytically:
//   grad f_i(x) = data_gradient(i, x) + shared_gradient(x).
// Instances are immutable and safe to share across threads.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::string name() const = 0;
    virtual std::size_t n() const = 0;
    virtual std::size_t d() const = 0;
    virtual NormKind norm_kind() const { return NormKind::euclidean; }
    virtual Domain domain() const { return Domain::unconstrained; }
    virtual std::optional<double> smoothness() const { return std::nullopt; }
    virtual std::optional<double> strong_convexity() const { return std::nullopt; }

    // f_i(x), shared term included.
    virtual double value(std::size_t i, std::span<const double> x) const = 0;

    // Writes the data part of grad f_i(x) into g (length d) and returns the
    // radius within which that part stays fixed, or +inf.
    virtual double data_gradient(std::size_t i, std::span<const double> x,
                                 std::span<double> g) const = 0;

    virtual double radius(std::size_t i, std::span<const double> x) const;

    virtual bool has_shared() const { return false; }
    // g += shared_gradient(x)
    virtual void add_shared_gradient(std::span<const double> /*x*/, std::span<double> /*g*/) const {}
};

using ProblemPtr = std::shared_ptr<const Problem>;

// (1/n) sum_i f_i(x). Unmetered.
double full_objective(const Problem& p, std::span<const double> x);

// grad f_i(x), shared term included. Bills one unit.
Vector component_gradient(const Problem& p, std::size_t i, std::span<const double> x,
                          GradMeter& meter);

// Standalone radius query. Bills one unit.
double lingering_radius(const Problem& p, std::size_t i, std::span<const double> x,
                        GradMeter& meter);

// Exact (1/n) sum_i grad f_i(x), straight summation. Unmetered; for checks.
Vector exact_gradient(const Problem& p, std::span<const double> x);

void project_inplace(const Problem& p, std::span<double> x);
Vector project(const Problem& p, Vector x);

void check_dimension(const Problem& p, std::span<const double> x);
void check_index(const Problem& p, std::size_t i);

// Wraps a problem and replaces every radius by a constant. Used to force the
// degenerate cases delta == 0 and delta == +inf.
class FixedRadius final : public Problem {
public:
    FixedRadius(ProblemPtr inner, double r) : inner_(std::move(inner)), r_(r) {}

    std::string name() const override { return inner_->name(); }
    std::size_t n() const override { return inner_->n(); }
    std::size_t d() const override { return inner_->d(); }
    NormKind norm_kind() const override { return inner_->norm_kind(); }
    Domain domain() const override { return inner_->domain(); }
    std::optional<double> smoothness() const override { return inner_->smoothness(); }
    std::optional<double> strong_convexity() const override { return inner_->strong_convexity(); }
    double value(std::size_t i, std::span<const double> x) const override {
        return inner_->value(i, x);
    }
    double data_gradient(std::size_t i, std::span<const double> x,
                         std::span<double> g) const override {
        inner_->data_gradient(i, x, g);
        return r_;
    }
    double radius(std::size_t, std::span<const double>) const override { return r_; }
    bool has_shared() const override { return inner_->has_shared(); }
    void add_shared_gradient(std::span<const double> x, std::span<double> g) const override {
        inner_->add_shared_gradient(x, g);
    }

private:
    ProblemPtr inner_;
    double r_;
};

}  // namespace linger
