#include "linger/problem.hpp"

#include <algorithm>
#include <stdexcept>

#include "linger/kernels.hpp"

namespace linger {

double Problem::radius(std::size_t i, std::span<const double> x) const {
    Vector g(d());
    return data_gradient(i, x, g);
}

void check_dimension(const Problem& p, std::span<const double> x) {
    if (x.size() != p.d())
        throw std::invalid_argument("dimension mismatch: expected " + std::to_string(p.d()) +
                                    ", got " + std::to_string(x.size()));
}

void check_index(const Problem& p, std::size_t i) {
    if (i >= p.n())
        throw std::out_of_range("component index " + std::to_string(i) + " out of range [0, " +
                                std::to_string(p.n()) + ")");
}

double full_objective(const Problem& p, std::span<const double> x) {
    check_dimension(p, x);
    return kernels::objective_sum(p, x) / static_cast<double>(p.n());
}

Vector component_gradient(const Problem& p, std::size_t i, std::span<const double> x,
                          GradMeter& meter) {
    check_index(p, i);
    check_dimension(p, x);
    Vector g(p.d());
    p.data_gradient(i, x, g);
    p.add_shared_gradient(x, g);
    meter.bill(1);
    return g;
}

double lingering_radius(const Problem& p, std::size_t i, std::span<const double> x,
                        GradMeter& meter) {
    check_index(p, i);
    check_dimension(p, x);
    meter.bill(1);
    return p.radius(i, x);
}

Vector exact_gradient(const Problem& p, std::span<const double> x) {
    check_dimension(p, x);
    const std::size_t d = p.d();
    Vector sum(d, 0.0), g(d);
    for (std::size_t i = 0; i < p.n(); ++i) {
        p.data_gradient(i, x, g);
        for (std::size_t j = 0; j < d; ++j) sum[j] += g[j];
    }
    for (double& v : sum) v /= static_cast<double>(p.n());
    p.add_shared_gradient(x, sum);
    return sum;
}

void project_inplace(const Problem& p, std::span<double> x) {
    if (p.domain() == Domain::nonnegative_orthant)
        for (double& v : x) v = std::max(0.0, v);
}

Vector project(const Problem& p, Vector x) {
    project_inplace(p, x);
    return x;
}

}  // namespace linger
