#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "linger/lp.hpp"
#include "linger/synthetic.hpp"
#include "support.hpp"

using namespace linger;

TEST_CASE("toy instance gradient, radius and primal row") {
    LpProblem lp(testing::toy_lp());
    Vector x{0.0, 0.0}, g(2);
    const double r = lp.data_gradient(0, x, g);
    // w = softmax(100, 25), so w_1 = 1 - e^-75 and w_2 = e^-75.
    CHECK(g[0] == doctest::Approx(0.3 - 1.0).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(r == doctest::Approx(0.7 / 1.5).epsilon(1e-14));
    CHECK(lp.radius(0, x) == r);
    Vector y = primal_recover(lp.instance(), x, 0);
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] < 1e-32);
}

TEST_CASE("tied top exponents clamp the radius to zero") {
    LpInstance in = testing::toy_lp();
    in.p = {0.5, 1.0};
    in.pbar = {1.0};
    in.r = {1.0, 0.5};  // both exponents are 0.5 / mu
    LpProblem lp(in);
    CHECK(lp.radius(0, Vector{0.0, 0.0}) == 0.0);
}

TEST_CASE("equal exponents give a uniform row") {
    LpInstance in = testing::toy_lp();
    in.d = 4;
    in.p = {0.3, 0.3, 0.3, 0.3};
    in.pbar = {0.3};
    in.r = {0.7, 0.7, 0.7, 0.7};
    in.b = {1, 1, 1, 1};
    Vector y = primal_recover(in, Vector(4, 0.0), 0);
    for (double v : y) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("generated instances") {
    LpInstance a = generate_lp(1000, 10, 7), b = generate_lp(1000, 10, 7);
    CHECK(a.p == b.p);
    CHECK(a.r == b.r);
    CHECK(a.r[0] == 0.05);
    CHECK(a.b[0] == 2000.0);
    for (std::size_t j = 1; j < 10; ++j) {
        CHECK(a.b[j] == doctest::Approx(1.0));
        CHECK(a.r[j] >= 0.05);
        CHECK(a.r[j] <= 0.95);
    }
    for (std::size_t i = 0; i < a.n; ++i) {
        double mx = 0.0;
        for (std::size_t j = 0; j < a.d; ++j) {
            REQUIRE(a.prob(i, j) >= 0.0);
            REQUIRE(a.prob(i, j) <= 1.0);
            mx = std::max(mx, a.prob(i, j));
        }
        REQUIRE(a.pbar[i] == mx);
    }
    CHECK(a.mu == 1e-5);
    CHECK(a.theta == 5.0);
    CHECK(generate_lp(1000, 10, 8).p != a.p);
    CHECK_THROWS(generate_lp(5, 10, 1));
}

TEST_CASE("save and load round trip exactly") {
    LpInstance a = generate_lp(200, 6, 3);
    a.mu = 2.5e-4;
    const auto path = std::filesystem::temp_directory_path() / "linger_lp_roundtrip.txt";
    save_lp(a, path.string());
    LpInstance b = load_lp(path.string());
    std::filesystem::remove(path);
    CHECK(b.n == a.n);
    CHECK(b.d == a.d);
    CHECK(b.p == a.p);
    CHECK(b.r == a.r);
    CHECK(b.b == a.b);
    CHECK(b.pbar == a.pbar);
    CHECK(b.mu == a.mu);
    CHECK(b.theta == a.theta);
    CHECK(b.seed == a.seed);
    CHECK_THROWS(load_lp("/nonexistent/lp.txt"));
}

TEST_CASE("gradients match finite differences") {
    for (double mu : {1e-2, 1e-3}) {
        LpInstance in = generate_lp(60, 5, 11);
        in.mu = mu;
        LpProblem lp(in);
        std::mt19937_64 rng(1);
        for (int t = 0; t < 20; ++t) {
            Vector x = testing::random_vector(rng, 5, 0.0, 0.8);
            Vector g = exact_gradient(lp, x);
            Vector fd = testing::fd_gradient(lp, x, 1e-6);
            REQUIRE(testing::rel_diff(g, fd) <= 1e-5);
        }
    }
}

TEST_CASE("softmax rows sum to one") {
    LpInstance in = generate_lp(100, 8, 5);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 1000; ++t) {
        Vector x = testing::random_vector(rng, 8, 0.0, 1.0);
        Vector y = primal_recover(in, x, rng() % in.n);
        double s = 0.0;
        for (double v : y) {
            REQUIRE(v >= 0.0);
            s += v;
        }
        REQUIRE(std::abs(s - 1.0) <= 1e-12);
    }
}

TEST_CASE("high prices push demand to the overflow resource") {
    LpInstance in = generate_lp(300, 6, 9);
    Vector x(6, 10.0);
    x[0] = 0.0;
    LpProblem lp(in);
    double expect = 0.0;
    for (std::size_t i = 0; i < in.n; ++i) {
        Vector y = primal_recover(in, x, i);
        REQUIRE(y[0] > 1.0 - 1e-12);
        expect += in.prob(i, 0);
    }
    expect = 0.05 * std::min(in.b[0], expect);
    CHECK(truncated_revenue(in, x) == doctest::Approx(expect).epsilon(1e-9));
    const double opt = lp_dual_bound(in, Vector(6, 0.0));
    CHECK(primal_error(in, x, opt) > 0.8);
    CHECK_THROWS(primal_error(in, x, 0.0));
}

TEST_CASE("more capacity never lowers the truncated revenue") {
    LpInstance in = generate_lp(400, 5, 4);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        Vector x = testing::random_vector(rng, 5, 0.0, 0.5);
        const double base = truncated_revenue(in, x);
        LpInstance more = in;
        for (double& b : more.b) b *= 2;
        REQUIRE(truncated_revenue(more, x) >= base);
    }
}

TEST_CASE("larger theta never enlarges a radius") {
    LpInstance in = generate_lp(200, 6, 6);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        Vector x = testing::random_vector(rng, 6, 0.0, 0.6);
        const std::size_t i = rng() % in.n;
        double prev = kInf;
        for (double theta : {0.0, 1.0, 5.0, 20.0, 50.0}) {
            in.theta = theta;
            const double r = LpProblem(in).radius(i, x);
            REQUIRE(r <= prev);
            prev = r;
        }
    }
}

// The data gradient b - n p_i w_i scales with n, so soundness is measured on
// the component's share of grad f, i.e. grad f_i / n.
TEST_CASE("radius soundness on a small instance") {
    LpInstance in = generate_lp(500, 8, 12);
    in.theta = 20.0;
    LpProblem lp(in);
    std::mt19937_64 rng(5);
    Vector g0(8), g1(8);
    int moved = 0;
    for (int t = 0; t < 10000; ++t) {
        Vector x = testing::random_vector(rng, 8, 0.0, 0.6);
        const std::size_t i = rng() % in.n;
        const double r = lp.data_gradient(i, x, g0);
        Vector u = testing::unit_direction(rng, 8, NormKind::infinity);
        const double step = std::uniform_real_distribution<double>(0.0, std::min(r, 1e3))(rng);
        Vector y = x;
        axpy(step, u, y);
        for (double& v : y) v = std::max(v, 0.0);
        lp.data_gradient(i, y, g1);
        double diff = 0.0;
        for (std::size_t j = 0; j < 8; ++j) diff = std::max(diff, std::abs(g1[j] - g0[j]));
        REQUIRE(diff / static_cast<double>(in.n) <= kEqTol);
        moved += step > 0.0;
    }
    CHECK(moved > 1000);
}

TEST_CASE("newton reference certifies the regularized optimum") {
    LpInstance in = generate_lp(3000, 10, 2);
    LpProblem lp(in);
    LpReference ref = lp_newton_reference(in);
    CHECK(ref.pg_norm <= 1e-10 * static_cast<double>(in.n));
    CHECK(ref.value == doctest::Approx(full_objective(lp, ref.x)).epsilon(1e-14));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
        Vector x = ref.x;
        Vector u = testing::random_vector(rng, 10, -1e-3, 1e-3);
        axpy(1.0, u, x);
        for (double& v : x) v = std::max(v, 0.0);
        REQUIRE(full_objective(lp, x) >= ref.value);
    }
    CHECK(ref.dual_bound >= ref.revenue);
    // The recovered primal is within the regularization scale of the optimum.
    CHECK(primal_error(in, ref.x, ref.dual_bound) <= 2 * in.mu * 10);
}

TEST_CASE("profile of radii is a cumulative distribution") {
    LpProblem lp(generate_lp(1000, 10, 1));
    std::vector<double> rs{0.0, 1e-4, 1e-3, 1e-2, 0.1, 0.3, 1.0, kInf};
    auto prof = profile_B(lp, Vector(10, 0.0), rs);
    CHECK(prof.front() == 0.0);
    for (std::size_t k = 1; k < prof.size(); ++k) CHECK(prof[k] >= prof[k - 1]);
    for (double v : prof) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(prof.back() == 1.0);
}
