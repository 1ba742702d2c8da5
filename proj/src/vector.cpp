#include "linger/vector.hpp"

#include <algorithm>
#include <cmath>

namespace linger {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

double norm(std::span<const double> a, NormKind kind) {
    if (kind == NormKind::infinity) {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
    return std::sqrt(dot(a, a));
}

double distance(std::span<const double> a, std::span<const double> b, NormKind kind) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double t = a[j] - b[j];
        if (kind == NormKind::infinity)
            acc = std::max(acc, std::abs(t));
        else
            acc += t * t;
    }
    return kind == NormKind::infinity ? acc : std::sqrt(acc);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t j = 0; j < x.size(); ++j) y[j] += a * x[j];
}

bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace linger
