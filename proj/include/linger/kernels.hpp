#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "linger/problem.hpp"

// Data-parallel passes over components. The OpenMP versions reduce over
// fixed-size blocks in block order, so results do not depend on the thread
// count. The *_serial versions are plain loops kept as references.
namespace linger::kernels {

inline constexpr std::size_t kBlock = 512;

double objective_sum(const Problem& p, std::span<const double> x);
double objective_sum_serial(const Problem& p, std::span<const double> x);

// For every position k, evaluates the data gradient of component idx[k] at x.
// Writes it to row idx[k] of table (n x d, may be null), its radius to
// radii[k] (may be null), and stores the sum of the gradients in sum.
void gradient_pass(const Problem& p, std::span<const double> x,
                   std::span<const std::uint32_t> idx, double* table, double* radii,
                   std::span<double> sum);
void gradient_pass_serial(const Problem& p, std::span<const double> x,
                          std::span<const std::uint32_t> idx, double* table, double* radii,
                          std::span<double> sum);

// Evaluates component idx[k] at x into row k of rows (idx.size() x d) and its
// radius into radii[k]. No reduction.
void gradient_rows(const Problem& p, std::span<const double> x,
                   std::span<const std::uint32_t> idx, double* rows, double* radii);

// Radius of every component at x.
void all_radii(const Problem& p, std::span<const double> x, std::span<double> out);
void all_radii_serial(const Problem& p, std::span<const double> x, std::span<double> out);

// Caps the OpenMP team size (0 leaves the runtime default).
void set_threads(int threads);
int max_threads();

}  // namespace linger::kernels
