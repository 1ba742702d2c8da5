#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace linger {

using Vector = std::vector<double>;

enum class NormKind { euclidean, infinity };

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a, NormKind kind);
double distance(std::span<const double> a, std::span<const double> b, NormKind kind);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

bool all_finite(std::span<const double> a);

}  // namespace linger
