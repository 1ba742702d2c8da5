#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "linger/meter.hpp"
#include "linger/monitor.hpp"
#include "linger/problem.hpp"

namespace linger {

enum class SvrgVariant { svrg_lin, scsg_lin };

// Indices whose epoch-s snapshot gradients are still valid, sorted by their
// radius at the snapshot. Members before `cursor` have been evicted.
struct HSet {
    std::size_t epoch = 0;
    Vector snapshot;
    std::vector<std::uint32_t> members;
    std::vector<double> radii;
    std::size_t cursor = 0;
    Vector stored_sum;        // sum of the surviving members' snapshot gradients
    std::size_t unsummed = 0;  // evictions subtracted from stored_sum since it was last summed
    double anchor_dist = 0.0;  // exact distance from snapshot to the current anchor point

    std::size_t alive() const { return members.size() - cursor; }
};

struct SvrgLinEpoch {
    std::size_t h_size = 0;          // |H_s|
    std::uint64_t length = 0;        // scheduled inner iterations
    std::uint64_t inner = 0;         // inner iterations run
    std::uint64_t sampled = 0;       // inner iterations with a nonempty live set
    std::uint64_t billed = 0;        // oracle units billed in the epoch
    std::size_t frozen_at_end = 0;   // sum of |H| alive when the epoch ends
};

struct SvrgLinConfig {
    double eta = 0.1;
    std::size_t S = 1000000;  // epoch cap; the pass budget normally stops first
    SvrgVariant variant = SvrgVariant::svrg_lin;
    std::size_t mbar0 = 100;
    std::size_t min_epoch_len = 16;
    // Exact distance recomputation cadence; 0 uses the current epoch count.
    std::size_t distance_exact_every = 0;
    std::uint64_t seed = 1;
    Vector x0;
    // Called after the removal step of every iteration; for tests.
    std::function<void(std::span<const double> x, const std::vector<HSet>& sets)> audit;
};

// grad f(x0) + live_fraction * (grad_i(x_k) - grad_i(x0)), written into out.
void estimator(std::span<const double> full_snapshot, std::span<const double> grad_now,
               std::span<const double> grad_snapshot, double live_fraction, std::span<double> out);
Vector estimator(std::span<const double> full_snapshot, std::span<const double> grad_now,
                 std::span<const double> grad_snapshot, double live_fraction);

// Pops the sorted prefix with radius < dist_bound. The evicted members are appended
// to `evicted` and their rows (table is n x d) are subtracted from stored_sum.
std::size_t evict(HSet& h, double dist_bound, std::span<const double> table, std::size_t d,
                  std::vector<std::uint32_t>& evicted);

Vector run_svrglin(const Problem& p, const SvrgLinConfig& cfg, GradMeter& meter, Monitor& monitor,
                   std::vector<SvrgLinEpoch>* epochs = nullptr);

// SCSG with lingering radii: run_svrglin with variant = scsg_lin.
Vector run_scsglin(const Problem& p, SvrgLinConfig cfg, GradMeter& meter, Monitor& monitor,
                   std::vector<SvrgLinEpoch>* epochs = nullptr);

// Uniform sampling set with O(1) insert, remove and draw.
class IndexArena {
public:
    explicit IndexArena(std::size_t n) : pos_(n, kAbsent) {}

    void fill_all();
    void insert(std::uint32_t i);
    void remove(std::uint32_t i);
    bool contains(std::uint32_t i) const { return pos_[i] != kAbsent; }
    void clear();

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::uint32_t operator[](std::size_t k) const { return items_[k]; }
    const std::vector<std::uint32_t>& items() const { return items_; }

private:
    static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
    std::vector<std::uint32_t> items_;
    std::vector<std::size_t> pos_;
};

// First k entries of a seeded partial Fisher-Yates shuffle of pool.
std::vector<std::uint32_t> sample_subset(std::uint64_t seed, std::uint64_t stream,
                                         std::vector<std::uint32_t> pool, std::size_t k);

// Random stream tags shared with the baselines so that equal seeds give
// equal draws.
inline constexpr std::uint64_t kStreamInner = 1;
inline constexpr std::uint64_t kStreamBatch = 2;

}  // namespace linger
