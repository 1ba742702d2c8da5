#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "linger/baselines.hpp"
#include "linger/svrglin.hpp"
#include "support.hpp"

using namespace linger;

TEST_CASE("estimator special cases") {
    Vector full{1.0, 2.0}, now{5.0, -1.0}, snap{0.5, 0.5};
    CHECK(estimator(full, now, snap, 0.0) == full);
    CHECK(estimator(full, snap, snap, 0.7) == full);
    Vector g = estimator(full, now, snap, 0.5);
    CHECK(g[0] == doctest::Approx(1.0 + 0.5 * 4.5));
    CHECK_THROWS(estimator(full, now, snap, 1.5));
}

TEST_CASE("estimator averaged over the live set is the full gradient") {
    // n = 4 with components 0 and 2 frozen (their gradients did not move).
    std::mt19937_64 rng(3);
    const std::size_t n = 4, d = 3;
    std::vector<Vector> at0(n), atk(n);
    for (std::size_t i = 0; i < n; ++i) {
        at0[i] = testing::random_vector(rng, d);
        atk[i] = (i == 0 || i == 2) ? at0[i] : testing::random_vector(rng, d);
    }
    Vector full(d, 0.0), truth(d, 0.0), avg(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            full[j] += at0[i][j] / n;
            truth[j] += atk[i][j] / n;
        }
    for (std::size_t i : {1, 3}) {
        Vector g = estimator(full, atk[i], at0[i], 0.5);
        for (std::size_t j = 0; j < d; ++j) avg[j] += g[j] / 2;
    }
    CHECK(testing::rel_diff(avg, truth) < 1e-14);
}

TEST_CASE("eviction pops the sorted prefix below the bound") {
    const std::size_t d = 2;
    std::vector<double> table{1, 0, 0, 1, 2, 2};
    auto fresh = [&] {
        HSet h;
        h.members = {0, 1, 2};
        h.radii = {0.1, 0.5, 2.0};
        h.stored_sum = {3, 3};
        return h;
    };
    std::vector<std::uint32_t> out;
    HSet h = fresh();
    CHECK(evict(h, 0.6, table, d, out) == 2);
    CHECK(out == std::vector<std::uint32_t>{0, 1});
    CHECK(h.alive() == 1);
    CHECK(h.stored_sum == Vector{2, 2});
    h = fresh();
    out.clear();
    CHECK(evict(h, 0.0, table, d, out) == 0);
    h = fresh();
    CHECK(evict(h, kInf, table, d, out) == 3);
    CHECK(h.alive() == 0);
}

TEST_CASE("index arena") {
    IndexArena a(6);
    a.fill_all();
    CHECK(a.size() == 6);
    a.remove(2);
    a.remove(2);
    CHECK(a.size() == 5);
    CHECK_FALSE(a.contains(2));
    a.insert(2);
    a.insert(2);
    CHECK(a.size() == 6);
    std::set<std::uint32_t> seen(a.items().begin(), a.items().end());
    CHECK(seen.size() == 6);
    a.clear();
    CHECK(a.empty());
}

TEST_CASE("seeded subsets") {
    std::vector<std::uint32_t> pool(100);
    std::iota(pool.begin(), pool.end(), 0u);
    auto a = sample_subset(5, 9, pool, 30), b = sample_subset(5, 9, pool, 30);
    CHECK(a == b);
    CHECK(std::set<std::uint32_t>(a.begin(), a.end()).size() == 30);
    CHECK(sample_subset(5, 10, pool, 30) != a);
    CHECK(sample_subset(5, 9, pool, 300).size() == 100);
}

TEST_CASE("scsg_lin batch sizes") {
    auto q = testing::random_quadratic(5000, 2, 1);
    SvrgLinConfig cfg;
    cfg.variant = SvrgVariant::scsg_lin;
    cfg.eta = 1e-3;
    cfg.S = 6;
    GradMeter m(q->n());
    Monitor mon(*q, m, {.pass_budget = 1e6});
    std::vector<SvrgLinEpoch> eps;
    run_svrglin(*q, cfg, m, mon, &eps);
    REQUIRE(eps.size() == 6);
    CHECK(eps[0].h_size == 100);
    CHECK(eps[3].h_size == 800);

    auto small = testing::random_quadratic(150, 2, 2);
    GradMeter m2(small->n());
    Monitor mon2(*small, m2, {.pass_budget = 1e6});
    eps.clear();
    cfg.S = 3;
    run_svrglin(*small, cfg, m2, mon2, &eps);
    CHECK(eps[1].h_size == 150);
}

TEST_CASE("constant gradients freeze everything after the first epoch") {
    testing::LinearProblem lin(40, 3, 8);
    SvrgLinConfig cfg;
    cfg.eta = 0.01;
    cfg.S = 5;
    GradMeter m(lin.n());
    Monitor mon(lin, m, {.pass_budget = 1e6});
    std::vector<SvrgLinEpoch> eps;
    run_svrglin(lin, cfg, m, mon, &eps);
    REQUIRE(eps.size() == 5);
    CHECK(eps[0].billed == 40);
    for (std::size_t s = 1; s < 5; ++s) {
        CHECK(eps[s].billed == 0);
        CHECK(eps[s].sampled == 0);
        CHECK(eps[s].inner == cfg.min_epoch_len);
    }
}

TEST_CASE("frozen components are sound and disjoint on a hinge problem") {
    GaussianSpec gs;
    gs.n = 200;
    gs.d = 5;
    gs.kappa = 2.0;
    gs.seed = 4;
    auto ds = std::make_shared<SvmDataset>(generate_gaussian(gs));
    SvmProblem p(ds);
    SvrgLinConfig cfg;
    cfg.eta = 0.05;
    cfg.distance_exact_every = 1;
    std::size_t audits = 0, frozen_seen = 0;
    double worst = 0.0;
    bool disjoint = true;
    Vector now(p.d()), then(p.d());
    cfg.audit = [&](std::span<const double> x, const std::vector<HSet>& sets) {
        ++audits;
        std::set<std::uint32_t> seen;
        for (const auto& h : sets)
            for (std::size_t q = h.cursor; q < h.members.size(); ++q) {
                const std::uint32_t i = h.members[q];
                disjoint = disjoint && seen.insert(i).second;
                p.data_gradient(i, x, now);
                p.data_gradient(i, h.snapshot, then);
                double diff = 0.0;
                for (std::size_t j = 0; j < p.d(); ++j) diff = std::max(diff, std::abs(now[j] - then[j]));
                worst = std::max(worst, diff);
                ++frozen_seen;
            }
    };
    GradMeter m(p.n());
    Monitor mon(p, m, {.pass_budget = 15});
    std::vector<SvrgLinEpoch> eps;
    run_svrglin(p, cfg, m, mon, &eps);
    CHECK(audits > 1000);
    CHECK(frozen_seen > 1000);
    CHECK(disjoint);
    CHECK(worst <= kEqTol);
    for (const auto& e : eps) CHECK(e.billed == e.h_size + e.sampled);
}

TEST_CASE("zero radii reproduce svrg step for step") {
    auto q = testing::random_quadratic(30, 3, 5);
    FixedRadius zero(q, 0.0);
    std::vector<Vector> a, b;
    MonitorOptions oa{.pass_budget = 12};
    oa.on_step = [&](std::span<const double> x) { a.emplace_back(x.begin(), x.end()); };
    MonitorOptions ob{.pass_budget = 12};
    ob.on_step = [&](std::span<const double> x) { b.emplace_back(x.begin(), x.end()); };
    SvrgLinConfig lc;
    lc.eta = 0.02;
    lc.seed = 3;
    GradMeter ma(q->n()), mb(q->n());
    Monitor mona(zero, ma, oa), monb(*q, mb, ob);
    run_svrglin(zero, lc, ma, mona);
    BaselineConfig bc;
    bc.method = BaselineMethod::svrg;
    bc.eta = 0.02;
    bc.seed = 3;
    run_baseline(*q, bc, mb, monb);
    const std::size_t common = std::min(a.size(), b.size());
    REQUIRE(common > 100);
    for (std::size_t k = 0; k < common; ++k) REQUIRE(a[k] == b[k]);
}
