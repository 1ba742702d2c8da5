#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "linger/vector.hpp"

namespace linger {

// Largest power of two dividing k. Throws for k == 0.
std::uint64_t lowbit(std::uint64_t k);

// (k_0 = 0, ..., k_t = k) with k_{i} = k_{i+1} - lowbit(k_{i+1}).
std::vector<std::uint64_t> lowbit_sequence(std::uint64_t k);

// A constructed index set Lambda_l, sorted by radius at x_l. Ties keep
// ascending index order; +inf radii sort last.
struct Bucket {
    std::uint64_t k = 0;
    std::vector<std::uint32_t> members;
    std::vector<double> radii;
};

// Sorts members by (radius, index).
Bucket make_bucket(std::uint64_t k, std::vector<std::uint32_t> members, std::vector<double> radii);

// Index sets Lambda_0..Lambda_{m-1} of one epoch. For k >= 1,
//   Lambda_k = U_i  B_{k_i}(k - k_i) \ B_{k_i}(k_{t-1} - k_i),
//   B_l(r)   = { j in Lambda_l : delta(x_l, j) < r * xi },
// where (k_0..k_t) is the lowbit sequence of k. Each B_l(r) is a prefix of
// bucket l; its length is cached per (l, r) and extended incrementally.
class IndexSchedule {
public:
    IndexSchedule(std::size_t n, double xi) : n_(n), xi_(xi) {}

    double xi() const { return xi_; }
    std::size_t n() const { return n_; }

    // Members of Lambda_k, k >= 1, as the concatenation of the slices
    // i = 0..t-1. Throws std::logic_error if a needed bucket was not stored.
    std::vector<std::uint32_t> index_set(std::uint64_t k);

    // The slices of Lambda_k individually, in lowbit-sequence order.
    std::vector<std::vector<std::uint32_t>> slices(std::uint64_t k);

    // Stores Lambda_k with the radii of its members at x_k.
    void add(std::uint64_t k, std::vector<std::uint32_t> members, std::vector<double> radii);

    // Drops buckets that no iteration >= next_k refers to.
    void release(std::uint64_t next_k);

    std::size_t retained() const { return buckets_.size(); }
    const Bucket* bucket(std::uint64_t k) const;

    // |B_l(r)|, from the cursor table when present.
    std::size_t prefix(std::uint64_t l, std::uint64_t r);

private:
    const Bucket& stored(std::uint64_t l) const;
    // |B_l(r)| found by scanning forward from a known shorter prefix.
    std::size_t extend(std::uint64_t l, std::uint64_t r, std::size_t from);

    static std::uint64_t key(std::uint64_t l, std::uint64_t r) { return (l << 32) | r; }

    std::size_t n_;
    double xi_;
    std::unordered_map<std::uint64_t, Bucket> buckets_;
    std::unordered_map<std::uint64_t, std::size_t> cursor_;
};

// Per-index gradients g_1..g_n plus their running mean.
class LingeringCache {
public:
    LingeringCache(std::size_t n, std::size_t d) : n_(n), d_(d), rows_(n * d, 0.0), agg_(d, 0.0) {}

    std::size_t n() const { return n_; }
    std::size_t d() const { return d_; }
    std::span<double> row(std::size_t i) { return {rows_.data() + i * d_, d_}; }
    std::span<const double> row(std::size_t i) const { return {rows_.data() + i * d_, d_}; }
    double* data() { return rows_.data(); }
    std::span<const double> aggregate() const { return agg_; }

    // aggregate += (g - g_i) / n, then g_i = g.
    void update(std::size_t i, std::span<const double> g);

    // aggregate = (1/n) sum_i g_i exactly. Returns the largest correction.
    double recompute();

private:
    std::size_t n_, d_;
    std::vector<double> rows_;
    Vector agg_;
};

}  // namespace linger
