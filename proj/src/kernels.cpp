#include "linger/kernels.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace linger::kernels {

namespace {

std::size_t block_count(std::size_t m) { return (m + kBlock - 1) / kBlock; }

}  // namespace

double objective_sum(const Problem& p, std::span<const double> x) {
    const std::size_t n = p.n();
    const std::size_t nb = block_count(n);
    std::vector<double> partial(nb, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += p.value(i, x);
        partial[b] = s;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double objective_sum_serial(const Problem& p, std::span<const double> x) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.n(); ++i) total += p.value(i, x);
    return total;
}

void gradient_pass(const Problem& p, std::span<const double> x,
                   std::span<const std::uint32_t> idx, double* table, double* radii,
                   std::span<double> sum) {
    const std::size_t d = p.d();
    const std::size_t m = idx.size();
    const std::size_t nb = block_count(m);
    std::vector<double> partial(nb * d, 0.0);
#pragma omp parallel
    {
        std::vector<double> scratch(d);
#pragma omp for schedule(static)
        for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
            const std::size_t hi = std::min(m, lo + kBlock);
            double* acc = partial.data() + static_cast<std::size_t>(b) * d;
            for (std::size_t k = lo; k < hi; ++k) {
                const std::size_t i = idx[k];
                double* g = table ? table + i * d : scratch.data();
                double r = p.data_gradient(i, x, std::span<double>(g, d));
                if (radii) radii[k] = r;
                for (std::size_t j = 0; j < d; ++j) acc[j] += g[j];
            }
        }
    }
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t j = 0; j < d; ++j) sum[j] += partial[b * d + j];
}

void gradient_pass_serial(const Problem& p, std::span<const double> x,
                          std::span<const std::uint32_t> idx, double* table, double* radii,
                          std::span<double> sum) {
    const std::size_t d = p.d();
    std::vector<double> scratch(d);
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const std::size_t i = idx[k];
        double* g = table ? table + i * d : scratch.data();
        double r = p.data_gradient(i, x, std::span<double>(g, d));
        if (radii) radii[k] = r;
        for (std::size_t j = 0; j < d; ++j) sum[j] += g[j];
    }
}

void gradient_rows(const Problem& p, std::span<const double> x,
                   std::span<const std::uint32_t> idx, double* rows, double* radii) {
    const std::size_t d = p.d();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(idx.size()); ++k) {
        double r = p.data_gradient(idx[k], x, std::span<double>(rows + k * d, d));
        if (radii) radii[k] = r;
    }
}

void all_radii(const Problem& p, std::span<const double> x, std::span<double> out) {
    const std::size_t n = p.n();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        out[i] = p.radius(static_cast<std::size_t>(i), x);
}

void all_radii_serial(const Problem& p, std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < p.n(); ++i) out[i] = p.radius(i, x);
}

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace linger::kernels
