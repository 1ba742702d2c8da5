#include "linger/lowbit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace linger {

std::uint64_t lowbit(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("lowbit(0) is undefined");
    return k & (~k + 1);
}

std::vector<std::uint64_t> lowbit_sequence(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("lowbit sequence of 0 is undefined");
    std::vector<std::uint64_t> seq{k};
    while (k != 0) {
        k -= lowbit(k);
        seq.push_back(k);
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
}

Bucket make_bucket(std::uint64_t k, std::vector<std::uint32_t> members, std::vector<double> radii) {
    if (members.size() != radii.size()) throw std::invalid_argument("bucket size mismatch");
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (radii[a] != radii[b]) return radii[a] < radii[b];
        return members[a] < members[b];
    });
    Bucket out;
    out.k = k;
    out.members.reserve(order.size());
    out.radii.reserve(order.size());
    for (std::size_t p : order) {
        out.members.push_back(members[p]);
        out.radii.push_back(radii[p]);
    }
    return out;
}

void IndexSchedule::add(std::uint64_t k, std::vector<std::uint32_t> members, std::vector<double> radii) {
    buckets_[k] = make_bucket(k, std::move(members), std::move(radii));
}

const Bucket* IndexSchedule::bucket(std::uint64_t k) const {
    auto it = buckets_.find(k);
    return it == buckets_.end() ? nullptr : &it->second;
}

const Bucket& IndexSchedule::stored(std::uint64_t l) const {
    auto it = buckets_.find(l);
    if (it == buckets_.end())
        throw std::logic_error("index schedule: bucket " + std::to_string(l) + " is not stored");
    return it->second;
}

std::size_t IndexSchedule::prefix(std::uint64_t l, std::uint64_t r) {
    if (r == 0) return 0;
    if (auto c = cursor_.find(key(l, r)); c != cursor_.end()) return c->second;
    const Bucket& b = stored(l);
    const double lim = static_cast<double>(r) * xi_;
    auto pos = static_cast<std::size_t>(
        std::lower_bound(b.radii.begin(), b.radii.end(), lim) - b.radii.begin());
    cursor_[key(l, r)] = pos;
    return pos;
}

std::size_t IndexSchedule::extend(std::uint64_t l, std::uint64_t r, std::size_t from) {
    const Bucket& b = stored(l);
    const double lim = static_cast<double>(r) * xi_;
    std::size_t pos = from;
    while (pos < b.radii.size() && b.radii[pos] < lim) ++pos;
    cursor_[key(l, r)] = pos;
    return pos;
}

std::vector<std::vector<std::uint32_t>> IndexSchedule::slices(std::uint64_t k) {
    auto seq = lowbit_sequence(k);
    const std::size_t t = seq.size() - 1;
    const std::uint64_t prev = seq[t - 1];
    std::vector<std::vector<std::uint32_t>> out(t);
    for (std::size_t i = 0; i < t; ++i) {
        const std::uint64_t l = seq[i];
        const std::size_t lo = prefix(l, prev - l);
        const std::size_t hi = extend(l, k - l, lo);
        const Bucket& b = stored(l);
        out[i].assign(b.members.begin() + static_cast<std::ptrdiff_t>(lo),
                      b.members.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    return out;
}

std::vector<std::uint32_t> IndexSchedule::index_set(std::uint64_t k) {
    std::vector<std::uint32_t> all;
    for (auto& s : slices(k)) all.insert(all.end(), s.begin(), s.end());
    return all;
}

void IndexSchedule::release(std::uint64_t next_k) {
    for (auto it = buckets_.begin(); it != buckets_.end();) {
        const std::uint64_t l = it->first;
        if (l != 0 && next_k >= l + lowbit(l))
            it = buckets_.erase(it);
        else
            ++it;
    }
    for (auto it = cursor_.begin(); it != cursor_.end();) {
        if (!buckets_.count(it->first >> 32))
            it = cursor_.erase(it);
        else
            ++it;
    }
}

void LingeringCache::update(std::size_t i, std::span<const double> g) {
    double* gi = rows_.data() + i * d_;
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < d_; ++j) {
        agg_[j] += (g[j] - gi[j]) * inv;
        gi[j] = g[j];
    }
}

double LingeringCache::recompute() {
    Vector fresh(d_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < d_; ++j) fresh[j] += rows_[i * d_ + j];
    double worst = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
        fresh[j] /= static_cast<double>(n_);
        worst = std::max(worst, std::abs(fresh[j] - agg_[j]));
    }
    agg_ = std::move(fresh);
    return worst;
}

}  // namespace linger
