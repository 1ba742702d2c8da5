#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "linger/lowbit.hpp"
#include "support.hpp"

using namespace linger;

TEST_CASE("lowbit") {
    CHECK(lowbit(34) == 2);
    CHECK(lowbit(12) == 4);
    CHECK(lowbit(8) == 8);
    CHECK(lowbit(1) == 1);
    CHECK_THROWS(lowbit(0));
}

TEST_CASE("lowbit sequences") {
    using S = std::vector<std::uint64_t>;
    CHECK(lowbit_sequence(45) == S{0, 32, 40, 44, 45});
    CHECK(lowbit_sequence(15) == S{0, 8, 12, 14, 15});
    CHECK(lowbit_sequence(8) == S{0, 8});
    CHECK_THROWS(lowbit_sequence(0));
    for (std::uint64_t k = 1; k < 2000; ++k) {
        S s = lowbit_sequence(k);
        REQUIRE(s.front() == 0);
        REQUIRE(s.back() == k);
        for (std::size_t i = 1; i < s.size(); ++i) REQUIRE(s[i - 1] == s[i] - lowbit(s[i]));
    }
}

TEST_CASE("first index set of a three-component configuration") {
    const double xi = 0.1;
    IndexSchedule sched(3, xi);
    sched.add(0, {0, 1, 2}, {0.5 * xi, 1.5 * xi, 9 * xi});
    CHECK(sched.index_set(1) == std::vector<std::uint32_t>{0});
}

TEST_CASE("nothing re-enters when every radius exceeds the epoch travel") {
    const std::size_t m = 16;
    IndexSchedule sched(4, 1.0);
    sched.add(0, {0, 1, 2, 3}, {17.0, 20.0, kInf, 100.0});
    for (std::uint64_t k = 1; k < m; ++k) {
        auto lam = sched.index_set(k);
        CHECK(lam.empty());
        sched.add(k, lam, {});
        sched.release(k + 1);
    }
}

TEST_CASE("missing buckets are reported") {
    IndexSchedule sched(2, 1.0);
    CHECK_THROWS_AS(sched.index_set(1), std::logic_error);
}

TEST_CASE("cache updates") {
    LingeringCache one(1, 2);
    one.update(0, Vector{3.0, -1.0});
    CHECK(one.aggregate()[0] == doctest::Approx(3.0));
    CHECK(one.aggregate()[1] == doctest::Approx(-1.0));

    std::mt19937_64 rng(5);
    LingeringCache two(2, 3);
    Vector a = testing::random_vector(rng, 3), b = testing::random_vector(rng, 3);
    two.update(0, a);
    two.update(1, b);
    Vector before(two.aggregate().begin(), two.aggregate().end());
    two.update(1, b);
    CHECK(Vector(two.aggregate().begin(), two.aggregate().end()) == before);
    for (std::size_t j = 0; j < 3; ++j) CHECK(two.aggregate()[j] == doctest::Approx((a[j] + b[j]) / 2));
    CHECK(two.recompute() < 1e-15);
}

namespace {

using Set = std::set<std::uint32_t>;

// Brute-force B_l(r) from the oracle's own copy of Lambda_l.
Set ball(const std::map<std::uint64_t, std::map<std::uint32_t, double>>& lam, std::uint64_t l,
         std::uint64_t r, double xi) {
    Set out;
    for (auto [i, rad] : lam.at(l))
        if (rad < static_cast<double>(r) * xi) out.insert(i);
    return out;
}

Set minus(Set a, const Set& b) {
    for (auto i : b) a.erase(i);
    return a;
}

double draw_radius(std::mt19937_64& rng, std::size_t m, double xi) {
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_real_distribution<double> u(0.0, 1.2 * static_cast<double>(m) * xi);
    std::uniform_int_distribution<std::size_t> mult(0, m);
    switch (kind(rng)) {
        case 0: return 0.0;
        case 1: return kInf;
        case 2: return static_cast<double>(mult(rng)) * xi;  // exactly on a ball boundary
        default: return u(rng);
    }
}

}  // namespace

TEST_CASE("slices and complements partition [n] and match the set formulas") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 64, m = 2 + rng() % 63;
        const double xi = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
        IndexSchedule sched(n, xi);
        std::map<std::uint64_t, std::map<std::uint32_t, double>> lam;
        std::vector<std::uint32_t> all(n);
        std::iota(all.begin(), all.end(), 0u);
        std::vector<double> r0(n);
        for (auto& r : r0) r = draw_radius(rng, m, xi);
        sched.add(0, all, r0);
        for (std::uint32_t i = 0; i < n; ++i) lam[0][i] = r0[i];

        for (std::uint64_t k = 1; k < m; ++k) {
            const auto seq = lowbit_sequence(k);
            const std::size_t t = seq.size() - 1;
            std::vector<Set> slice(t), perp(t);
            for (std::size_t i = 0; i < t; ++i) {
                Set later;
                for (std::size_t q = i + 1; q < t; ++q)
                    for (auto [j, r] : lam.at(seq[q])) later.insert(j);
                Set b = ball(lam, seq[i], k - seq[i], xi);
                Set whole;
                for (auto [j, r] : lam.at(seq[i])) whole.insert(j);
                slice[i] = minus(b, later);
                perp[i] = minus(minus(whole, b), later);
            }
            auto got = sched.slices(k);
            REQUIRE(got.size() == t);
            Set lam_k, cover;
            std::size_t total = 0;
            for (std::size_t i = 0; i < t; ++i) {
                REQUIRE(Set(got[i].begin(), got[i].end()) == slice[i]);
                REQUIRE(got[i].size() == slice[i].size());
                lam_k.insert(slice[i].begin(), slice[i].end());
                cover.insert(slice[i].begin(), slice[i].end());
                cover.insert(perp[i].begin(), perp[i].end());
                total += slice[i].size() + perp[i].size();
            }
            REQUIRE(total == n);  // disjoint
            REQUIRE(cover.size() == n);

            std::vector<std::uint32_t> members(lam_k.begin(), lam_k.end());
            std::vector<double> radii(members.size());
            lam[k];
            for (std::size_t q = 0; q < members.size(); ++q) {
                radii[q] = draw_radius(rng, m, xi);
                lam[k][members[q]] = radii[q];
            }
            sched.add(k, members, radii);
            sched.release(k + 1);
            const auto bound = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(k + 1)))) + 1;
            REQUIRE(sched.retained() <= bound);
        }
    }
}

TEST_CASE("buckets sort by radius with index ties and infinite radii last") {
    Bucket b = make_bucket(3, {4, 1, 7, 2}, {kInf, 0.5, 0.5, 0.1});
    CHECK(b.members == std::vector<std::uint32_t>{2, 1, 7, 4});
    CHECK(b.radii.back() == kInf);
}

namespace {

// Sum of |Lambda_k| / n over one epoch of m unit steps of length xi = C/m
// towards the minimizer of the cubic kink problem, whose profile grows
// linearly in r.
double epoch_cardinality(std::size_t m) {
    const KinkProblem p = make_cubic_kinks(20000);
    const double C = 0.5, xi = C / static_cast<double>(m);
    double x = 0.9;
    std::vector<std::uint32_t> all(p.n());
    std::iota(all.begin(), all.end(), 0u);
    IndexSchedule sched(p.n(), xi);
    std::vector<double> r(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) r[i] = p.radius(i, Vector{x});
    sched.add(0, all, r);
    double total = 0.0;
    for (std::uint64_t k = 1; k < m; ++k) {
        x -= xi;
        auto lam = sched.index_set(k);
        std::vector<double> rk(lam.size());
        for (std::size_t q = 0; q < lam.size(); ++q) rk[q] = p.radius(lam[q], Vector{x});
        total += static_cast<double>(lam.size());
        sched.add(k, std::move(lam), rk);
        sched.release(k + 1);
    }
    return total / static_cast<double>(p.n());
}

}  // namespace

TEST_CASE("index-set cardinality over an epoch grows like log^2 m") {
    std::vector<double> ratio;
    for (std::size_t m : {64, 128, 256, 512}) {
        const double lg = std::log2(static_cast<double>(m));
        ratio.push_back(epoch_cardinality(m) / (lg * lg));
        MESSAGE("m = " << m << ": sum |Lambda_k|/n / log^2 m = " << ratio.back());
    }
    for (double v : ratio) CHECK(v <= 1.25 * ratio.front());
}
