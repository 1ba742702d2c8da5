#include "linger/svrglin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "linger/kernels.hpp"
#include "linger/lowbit.hpp"
#include "linger/rng.hpp"

namespace linger {

void IndexArena::fill_all() {
    items_.resize(pos_.size());
    std::iota(items_.begin(), items_.end(), 0u);
    std::iota(pos_.begin(), pos_.end(), std::size_t{0});
}

void IndexArena::insert(std::uint32_t i) {
    if (pos_[i] != kAbsent) return;
    pos_[i] = items_.size();
    items_.push_back(i);
}

void IndexArena::remove(std::uint32_t i) {
    const std::size_t k = pos_[i];
    if (k == kAbsent) return;
    const std::uint32_t last = items_.back();
    items_[k] = last;
    pos_[last] = k;
    items_.pop_back();
    pos_[i] = kAbsent;
}

void IndexArena::clear() {
    for (std::uint32_t i : items_) pos_[i] = kAbsent;
    items_.clear();
}

std::vector<std::uint32_t> sample_subset(std::uint64_t seed, std::uint64_t stream,
                                         std::vector<std::uint32_t> pool, std::size_t k) {
    CounterRng rng(seed);
    k = std::min(k, pool.size());
    for (std::size_t t = 0; t < k; ++t) {
        std::size_t j = t + rng.below(stream, t, pool.size() - t);
        std::swap(pool[t], pool[j]);
    }
    pool.resize(k);
    return pool;
}

void estimator(std::span<const double> full_snapshot, std::span<const double> grad_now,
               std::span<const double> grad_snapshot, double live_fraction, std::span<double> out) {
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = full_snapshot[j] + live_fraction * (grad_now[j] - grad_snapshot[j]);
}

Vector estimator(std::span<const double> full_snapshot, std::span<const double> grad_now,
                 std::span<const double> grad_snapshot, double live_fraction) {
    if (live_fraction < 0.0 || live_fraction > 1.0)
        throw std::invalid_argument("live fraction outside [0, 1]");
    Vector out(full_snapshot.size());
    estimator(full_snapshot, grad_now, grad_snapshot, live_fraction, out);
    return out;
}

std::size_t evict(HSet& h, double dist_bound, std::span<const double> table, std::size_t d,
                  std::vector<std::uint32_t>& evicted) {
    const std::size_t before = h.cursor;
    while (h.cursor < h.members.size() && h.radii[h.cursor] < dist_bound) {
        const std::uint32_t i = h.members[h.cursor++];
        const double* row = table.data() + static_cast<std::size_t>(i) * d;
        for (std::size_t j = 0; j < d; ++j) h.stored_sum[j] -= row[j];
        evicted.push_back(i);
    }
    h.unsummed += h.cursor - before;
    return h.cursor - before;
}

namespace {

// Re-adds the surviving rows to clear the rounding left by subtractions. Done
// once the evictions since the last sum reach the survivor count, so the cost
// stays within a constant of the eviction work.
void resum(HSet& h, std::span<const double> table, std::size_t d) {
    if (h.unsummed == 0 || h.unsummed < h.alive()) return;
    h.unsummed = 0;
    std::fill(h.stored_sum.begin(), h.stored_sum.end(), 0.0);
    for (std::size_t q = h.cursor; q < h.members.size(); ++q) {
        const double* row = table.data() + static_cast<std::size_t>(h.members[q]) * d;
        for (std::size_t j = 0; j < d; ++j) h.stored_sum[j] += row[j];
    }
}

// A drift below this value evicts nothing from any set, so the scan over
// sets can be skipped. The margin covers rounding in anchor_dist + drift.
double eviction_trigger(const std::vector<HSet>& sets) {
    double t = kInf;
    for (const auto& h : sets) {
        if (h.alive() == 0) continue;
        const double r = h.radii[h.cursor];
        t = std::min(t, r - h.anchor_dist - 1e-12 * (r + h.anchor_dist));
    }
    return t;
}

}  // namespace

Vector run_svrglin(const Problem& p, const SvrgLinConfig& cfg, GradMeter& meter, Monitor& monitor,
                   std::vector<SvrgLinEpoch>* epochs) {
    const std::size_t n = p.n(), d = p.d();
    const NormKind nk = p.norm_kind();
    const bool scsg = cfg.variant == SvrgVariant::scsg_lin;
    if (!(cfg.eta > 0.0)) throw std::invalid_argument("svrg_lin needs eta > 0");
    if (cfg.mbar0 < 1) throw std::invalid_argument("svrg_lin needs mbar0 >= 1");

    const CounterRng rng(cfg.seed);
    Vector x = cfg.x0.empty() ? Vector(d, 0.0) : cfg.x0;
    check_dimension(p, x);
    project_inplace(p, x);

    // Row i holds the snapshot gradient of i; valid for the current epoch
    // when stamp[i] equals the epoch number.
    std::vector<double> table(n * d, 0.0);
    std::vector<std::size_t> stamp(n, static_cast<std::size_t>(-1));
    std::vector<HSet> sets;
    IndexArena live(n);
    live.fill_all();
    std::size_t frozen = 0;

    Vector full(d), fresh(d), g(d), now(d), prev(d);
    Vector anchor = x;
    std::size_t since_exact = 0;
    std::vector<std::uint32_t> evicted;
    std::uint64_t iter = 0;
    monitor.emit(x, 0);

    for (std::size_t s = 0; s < cfg.S && !monitor.exhausted(); ++s) {
        SvrgLinEpoch ep;
        const std::uint64_t start_calls = meter.calls();
        const Vector x0 = x;

        // H_s: all unfrozen indices, or a random batch of them (scsg_lin).
        const std::size_t remaining = live.size();
        std::vector<std::uint32_t> hs;
        if (scsg) {
            const double cap = static_cast<double>(cfg.mbar0) * std::pow(2.0, static_cast<double>(s));
            const auto mbar = static_cast<std::size_t>(std::min(static_cast<double>(n), cap));
            std::vector<std::uint32_t> pool = live.items();
            std::sort(pool.begin(), pool.end());
            hs = remaining > mbar ? sample_subset(cfg.seed, stream_id(kStreamBatch, s), pool, mbar)
                                  : pool;
        } else {
            hs = live.items();
        }
        std::sort(hs.begin(), hs.end());
        if (!monitor.affordable(hs.size())) break;
        for (std::uint32_t i : hs) live.remove(i);

        std::vector<double> radii(hs.size());
        kernels::gradient_pass(p, x0, hs, table.data(), radii.data(), fresh);
        meter.bill(hs.size());
        for (std::uint32_t i : hs) stamp[i] = s;

        // Full gradient from stored sums plus the fresh part.
        bool any_stored = false;
        std::fill(full.begin(), full.end(), 0.0);
        for (auto& h : sets) {
            resum(h, table, d);
            for (std::size_t j = 0; j < d; ++j) full[j] += h.stored_sum[j];
            any_stored = true;
        }
        const double weight =
            (scsg && !hs.empty()) ? static_cast<double>(remaining) / static_cast<double>(hs.size()) : 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double part = weight == 1.0 ? fresh[j] : weight * fresh[j];
            full[j] = any_stored ? full[j] + part : part;
            full[j] /= static_cast<double>(n);
        }

        if (!hs.empty()) {
            Bucket b = make_bucket(s, hs, radii);
            HSet h;
            h.epoch = s;
            h.snapshot = x0;
            h.members = std::move(b.members);
            h.radii = std::move(b.radii);
            h.stored_sum = fresh;
            sets.push_back(std::move(h));
            frozen += hs.size();
        }
        ep.h_size = hs.size();
        ep.length = std::max<std::uint64_t>(2 * hs.size(), cfg.min_epoch_len);

        // The anchor and its cadence carry over from the previous epoch; only
        // the new set needs its distance.
        const std::size_t exact_every = cfg.distance_exact_every > 0 ? cfg.distance_exact_every : s + 1;
        if (!hs.empty()) sets.back().anchor_dist = distance(sets.back().snapshot, anchor, nk);
        double trigger = eviction_trigger(sets);
        const std::uint64_t stream = stream_id(kStreamInner, s);

        bool stop = false;
        for (std::uint64_t k = 0; k < ep.length; ++k) {
            if (live.empty()) {
                std::copy(full.begin(), full.end(), g.begin());
            } else {
                const std::uint32_t i = live[rng.below(stream, k, live.size())];
                p.data_gradient(i, x, now);
                meter.bill(1);
                double* row = table.data() + static_cast<std::size_t>(i) * d;
                if (stamp[i] != s) {
                    p.data_gradient(i, x0, std::span<double>(row, d));
                    meter.bill(1);
                    stamp[i] = s;
                }
                const double live_fraction = 1.0 - static_cast<double>(frozen) / static_cast<double>(n);
                estimator(full, now, std::span<const double>(row, d), live_fraction, g);
                ++ep.sampled;
            }
            p.add_shared_gradient(x, g);
            prev = x;
            axpy(-cfg.eta, g, x);
            project_inplace(p, x);
            require_finite(x, "svrg_lin", ++iter);
            ++ep.inner;
            // With every component frozen the step is an exact projected
            // gradient step, so a step that does not move x is stationary.
            if (live.empty() && x == prev) {
                stop = true;
                break;
            }

            // Removal: distances exact every exact_every steps, otherwise
            // bounded by the triangle inequality through the anchor.
            if (++since_exact >= exact_every) {
                anchor = x;
                for (auto& h : sets) h.anchor_dist = distance(h.snapshot, anchor, nk);
                since_exact = 0;
                trigger = eviction_trigger(sets);
            }
            const double drift = since_exact == 0 ? 0.0 : distance(anchor, x, nk);
            if (drift >= trigger) {
                evicted.clear();
                for (auto& h : sets) frozen -= evict(h, h.anchor_dist + drift, table, d, evicted);
                // A member frozen at the snapshot still holds its gradient there.
                for (std::uint32_t i : evicted) {
                    live.insert(i);
                    stamp[i] = s;
                }
                std::erase_if(sets, [](const HSet& h) { return h.alive() == 0; });
                trigger = eviction_trigger(sets);
            }
            if (cfg.audit) cfg.audit(x, sets);

            monitor.step(x);
            monitor.tick(x, static_cast<std::int64_t>(frozen));
            if (monitor.exhausted()) {
                stop = true;
                break;
            }
        }
        ep.billed = meter.calls() - start_calls;
        ep.frozen_at_end = frozen;
        if (epochs) epochs->push_back(ep);
        if (stop) break;
    }
    monitor.finish(x, static_cast<std::int64_t>(frozen));
    return x;
}

Vector run_scsglin(const Problem& p, SvrgLinConfig cfg, GradMeter& meter, Monitor& monitor,
                   std::vector<SvrgLinEpoch>* epochs) {
    cfg.variant = SvrgVariant::scsg_lin;
    return run_svrglin(p, cfg, meter, monitor, epochs);
}

}  // namespace linger
