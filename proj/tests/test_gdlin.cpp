#include <doctest.h>

#include <cmath>

#include "linger/gdlin.hpp"
#include "support.hpp"

using namespace linger;

TEST_CASE("epoch lengths") {
    GdLinConfig t;
    t.mode = GdLinMode::theoretical;
    t.C = t.D = 1.0;
    CHECK(m_schedule(t, 1) == 2);
    CHECK(m_schedule(t, 0) == 1);
    GdLinConfig p;
    CHECK(m_schedule(p, 0) == 100);
    CHECK(m_schedule(p, 1) == 110);
    CHECK(m_schedule(p, 25) == 1000);
}

TEST_CASE("truncated step branches") {
    const double L = 2.0, xi = 0.1;
    Vector x{1.0, -1.0};
    Vector g{2 * L * xi, 0.0};
    Vector y = truncated_gd_step(x, g, xi, L);
    CHECK(distance(x, y, NormKind::euclidean) == doctest::Approx(xi));
    Vector h{0.0, L * xi / 2};
    y = truncated_gd_step(x, h, xi, L);
    CHECK(distance(x, y, NormKind::euclidean) == doctest::Approx(xi / 2));
    CHECK(truncated_gd_step(x, Vector{0.0, 0.0}, xi, L) == x);
}

TEST_CASE("truncated gd never moves away from the minimizer") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto q = testing::random_quadratic(6, 4, seed);
        const Vector& xs = q->minimizer();
        const double L = *q->smoothness();
        std::mt19937_64 rng(seed);
        Vector x0 = testing::random_vector(rng, 4, -5, 5);
        for (double xi : {1e-3, 0.05, 1.0, 100.0}) {
            auto path = run_truncated_gd(*q, x0, 64, xi, L);
            for (std::size_t k = 1; k < path.size(); ++k)
                REQUIRE(distance(path[k], xs, NormKind::euclidean) <=
                        distance(path[k - 1], xs, NormKind::euclidean) * (1 + 1e-12));
        }
    }
}

TEST_CASE("theoretical mode meets its error bound on a quadratic") {
    auto q = testing::random_quadratic(10, 3, 7);
    const double L = *q->smoothness();
    GdLinConfig cfg;
    cfg.mode = GdLinMode::theoretical;
    cfg.x0 = {2.0, -1.0, 0.5};
    cfg.D = distance(cfg.x0, q->minimizer(), NormKind::euclidean);
    cfg.C = cfg.D;
    cfg.S = 40;
    GradMeter m(q->n());
    Monitor mon(*q, m, {.pass_budget = 1e6});
    std::vector<GdLinEpoch> eps;
    Vector x = run_gdlin(*q, cfg, m, mon, &eps);
    REQUIRE(eps.size() == cfg.S);
    const double err = full_objective(*q, x) - q->optimum();
    CHECK(err <= 4 * L * cfg.D * cfg.D / static_cast<double>(m_schedule(cfg, cfg.S)));
    for (const auto& e : eps) CHECK(e.travel <= cfg.C * (1 + 1e-12));
}

TEST_CASE("zero radii bill m passes per epoch") {
    auto q = testing::random_quadratic(8, 3, 3);
    FixedRadius zero(q, 0.0);
    GdLinConfig cfg;
    cfg.warmup_steps = 0;
    cfg.S = 3;
    cfg.C = 0.01;
    cfg.x0 = {5, 5, 5};
    GradMeter m(zero.n());
    Monitor mon(zero, m, {.pass_budget = 1e6});
    std::vector<GdLinEpoch> eps;
    run_gdlin(zero, cfg, m, mon, &eps);
    REQUIRE(eps.size() == 3);
    for (const auto& e : eps) {
        REQUIRE(e.iterations == e.m);
        CHECK(e.billed_passes == doctest::Approx(static_cast<double>(e.m)));
    }
}

TEST_CASE("infinite radii with constant gradients bill one pass per epoch") {
    testing::LinearProblem lin(12, 4, 5);
    GdLinConfig cfg;
    cfg.mode = GdLinMode::theoretical;
    cfg.C = cfg.D = 1.0;
    cfg.S = 30;
    GradMeter m(lin.n());
    Monitor mon(lin, m, {.pass_budget = 1e6});
    std::vector<GdLinEpoch> eps;
    run_gdlin(lin, cfg, m, mon, &eps);
    for (const auto& e : eps) CHECK(e.billed_passes == doctest::Approx(1.0));
}

TEST_CASE("cached aggregate equals the full gradient on kink problems") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        KinkProblem p = make_uniform_kinks(24, 2, 0.05, seed);
        GdLinConfig cfg;
        cfg.mode = GdLinMode::theoretical;
        cfg.x0 = {0.9, -0.8};
        cfg.C = cfg.D = 1.5;
        cfg.S = 60;
        double worst = 0.0;
        std::size_t checked = 0;
        cfg.audit = [&](std::size_t, std::uint64_t, std::span<const double> x, std::span<const double> g) {
            Vector exact = exact_gradient(p, x);
            worst = std::max(worst, testing::rel_to_scale(p, x, g, exact));
            ++checked;
        };
        GradMeter m(p.n());
        Monitor mon(p, m, {.pass_budget = 1e6});
        std::vector<GdLinEpoch> eps;
        run_gdlin(p, cfg, m, mon, &eps);
        CHECK(checked > 30);
        CHECK(worst <= 1e-9);
        for (const auto& e : eps) {
            const auto bound = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(e.m)))) + 1;
            CHECK(e.max_retained <= bound);
            CHECK(e.drift < 1e-12);
        }
    }
}

TEST_CASE("practical mode decreases the objective and respects the budget") {
    auto q = testing::random_quadratic(50, 4, 11);
    GdLinConfig cfg;
    cfg.C = 0.05;
    cfg.x0 = {3, 3, 3, 3};
    GradMeter m(q->n());
    Monitor mon(*q, m, {.pass_budget = 120});
    run_gdlin(*q, cfg, m, mon);
    const auto& rec = mon.records();
    CHECK(rec.back().objective < rec.front().objective);
    CHECK(rec.back().pass_count <= 120 + 0.25);
}

TEST_CASE("theoretical mode rejects bad parameters") {
    auto q = testing::random_quadratic(4, 2, 1);
    GdLinConfig cfg;
    cfg.mode = GdLinMode::theoretical;
    cfg.C = 2.0;
    cfg.D = 1.0;
    GradMeter m(4);
    Monitor mon(*q, m);
    CHECK_THROWS(run_gdlin(*q, cfg, m, mon));
}
