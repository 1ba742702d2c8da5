#include "linger/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "linger/kernels.hpp"

namespace linger {

namespace {

// Exponent offsets below this contribute nothing representable to Z.
constexpr double kNegligible = -60.0;

struct Softmax {
    std::size_t jstar = 0;
    double amax = 0.0;
    double sum = 0.0;  // sum_j exp(t_j), t_j = (a_j - amax) / (pbar mu)
};

Softmax softmax(const LpInstance& in, std::size_t i, std::span<const double> x, double* a,
                double* w) {
    const double* pi = in.p.data() + i * in.d;
    Softmax s;
    s.amax = -kInf;
    for (std::size_t j = 0; j < in.d; ++j) {
        a[j] = (in.r[j] - x[j]) * pi[j];
        if (a[j] > s.amax) {
            s.amax = a[j];
            s.jstar = j;
        }
    }
    const double scale = 1.0 / (in.pbar[i] * in.mu);
    for (std::size_t j = 0; j < in.d; ++j) {
        const double t = (a[j] - s.amax) * scale;
        const double e = t < kNegligible ? 0.0 : std::exp(t);
        if (w) w[j] = e;
        s.sum += e;
    }
    return s;
}

double radius_from(const LpInstance& in, std::size_t i, const double* a, std::size_t jstar) {
    if (in.d == 1) return kInf;
    const double* pi = in.p.data() + i * in.d;
    const double slack = in.theta * in.pbar[i] * in.mu;
    double best = kInf;
    for (std::size_t j = 0; j < in.d; ++j) {
        if (j == jstar) continue;
        const double denom = pi[jstar] + pi[j];
        const double v = (a[jstar] - a[j] - slack) / denom;
        best = std::min(best, v);
    }
    return std::max(0.0, best);
}

}  // namespace

LpInstance generate_lp(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (d < 2 || n < d) throw std::invalid_argument("generate_lp needs n >= d >= 2");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uv(0.2, 1.0), uz(0.5, 1.0), ur(0.05, 0.95);
    LpInstance in;
    in.n = n;
    in.d = d;
    in.seed = seed;
    in.r.assign(d, 0.0);
    in.b.assign(d, 0.01 * static_cast<double>(n) / static_cast<double>(d));
    in.r[0] = 0.05;
    in.b[0] = 2.0 * static_cast<double>(n);
    for (std::size_t j = 1; j < d; ++j) in.r[j] = ur(gen);
    std::vector<double> v(d);
    for (auto& vj : v) vj = uv(gen);
    in.p.resize(n * d);
    in.pbar.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uv(gen);
        double mx = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            in.p[i * d + j] = u * v[j] * uz(gen);
            mx = std::max(mx, in.p[i * d + j]);
        }
        // The product is at most 1 already; rescaling keeps the row contract explicit.
        if (mx > 1.0) {
            for (std::size_t j = 0; j < d; ++j) in.p[i * d + j] /= mx;
            mx = 1.0;
        }
        in.pbar[i] = mx;
    }
    return in;
}

void save_lp(const LpInstance& in, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "%zu %zu %.17g %.17g %llu\n", in.n, in.d, in.mu, in.theta,
                 static_cast<unsigned long long>(in.seed));
    auto row = [&](const double* v, std::size_t m) {
        for (std::size_t j = 0; j < m; ++j) std::fprintf(f, j ? " %.17g" : "%.17g", v[j]);
        std::fprintf(f, "\n");
    };
    row(in.r.data(), in.d);
    row(in.b.data(), in.d);
    for (std::size_t i = 0; i < in.n; ++i) row(in.p.data() + i * in.d, in.d);
    std::fclose(f);
}

LpInstance load_lp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    LpInstance in;
    unsigned long long seed = 0;
    if (!(is >> in.n >> in.d >> in.mu >> in.theta >> seed) || in.n == 0 || in.d == 0)
        throw std::runtime_error(path + ": bad header");
    in.seed = seed;
    auto read = [&](std::vector<double>& v, std::size_t m, const char* what) {
        v.resize(m);
        for (auto& e : v)
            if (!(is >> e)) throw std::runtime_error(path + ": truncated " + what);
    };
    read(in.r, in.d, "revenues");
    read(in.b, in.d, "capacities");
    read(in.p, in.n * in.d, "probabilities");
    in.pbar.resize(in.n);
    for (std::size_t i = 0; i < in.n; ++i) {
        in.pbar[i] = *std::max_element(in.p.begin() + i * in.d, in.p.begin() + (i + 1) * in.d);
        if (!(in.pbar[i] > 0.0)) throw std::runtime_error(path + ": row with no positive entry");
    }
    return in;
}

LpProblem::LpProblem(LpInstance inst) : inst_(std::move(inst)) {
    for (double v : inst_.pbar)
        if (!(v > 0.0)) throw std::invalid_argument("lp: every row needs a positive entry");
}

double LpProblem::value(std::size_t i, std::span<const double> x) const {
    const auto& in = inst_;
    std::vector<double> a(in.d);
    Softmax s = softmax(in, i, x, a.data(), nullptr);
    const double nn = static_cast<double>(in.n);
    return nn * s.amax + in.mu * nn * in.pbar[i] * std::log(s.sum) + dot(x, in.b);
}

double LpProblem::data_gradient(std::size_t i, std::span<const double> x,
                                std::span<double> g) const {
    const auto& in = inst_;
    std::vector<double> a(in.d), w(in.d);
    Softmax s = softmax(in, i, x, a.data(), w.data());
    const double* pi = in.p.data() + i * in.d;
    const double nn = static_cast<double>(in.n);
    for (std::size_t j = 0; j < in.d; ++j) g[j] = in.b[j] - nn * pi[j] * (w[j] / s.sum);
    return radius_from(in, i, a.data(), s.jstar);
}

double LpProblem::radius(std::size_t i, std::span<const double> x) const {
    const auto& in = inst_;
    const double* pi = in.p.data() + i * in.d;
    std::vector<double> a(in.d);
    std::size_t jstar = 0;
    for (std::size_t j = 0; j < in.d; ++j) {
        a[j] = (in.r[j] - x[j]) * pi[j];
        if (a[j] > a[jstar]) jstar = j;
    }
    return radius_from(in, i, a.data(), jstar);
}

Vector primal_recover(const LpInstance& in, std::span<const double> x, std::size_t i) {
    std::vector<double> a(in.d);
    Vector y(in.d);
    Softmax s = softmax(in, i, x, a.data(), y.data());
    for (double& v : y) v /= s.sum;
    return y;
}

double truncated_revenue(const LpInstance& in, std::span<const double> x) {
    const std::size_t n = in.n, d = in.d;
    const std::size_t nb = (n + kernels::kBlock - 1) / kernels::kBlock;
    std::vector<double> partial(nb * d, 0.0);
#pragma omp parallel
    {
        std::vector<double> a(d), w(d);
#pragma omp for schedule(static)
        for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(nb); ++blk) {
            const std::size_t lo = static_cast<std::size_t>(blk) * kernels::kBlock;
            const std::size_t hi = std::min(n, lo + kernels::kBlock);
            double* acc = partial.data() + static_cast<std::size_t>(blk) * d;
            for (std::size_t i = lo; i < hi; ++i) {
                Softmax s = softmax(in, i, x, a.data(), w.data());
                for (std::size_t j = 0; j < d; ++j) acc[j] += in.p[i * d + j] * (w[j] / s.sum);
            }
        }
    }
    double rev = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double demand = 0.0;
        for (std::size_t blk = 0; blk < nb; ++blk) demand += partial[blk * d + j];
        rev += in.r[j] * std::min(in.b[j], demand);
    }
    return rev;
}

double primal_error(const LpInstance& in, std::span<const double> x, double opt) {
    if (!(opt > 0.0)) throw std::invalid_argument("primal_error needs OPT > 0");
    return (opt - truncated_revenue(in, x)) / opt;
}

double lp_dual_bound(const LpInstance& in, std::span<const double> x) {
    double total = dot(x, in.b);
    for (std::size_t i = 0; i < in.n; ++i) {
        double best = -kInf;
        for (std::size_t j = 0; j < in.d; ++j) best = std::max(best, (in.r[j] - x[j]) * in.prob(i, j));
        total += best;
    }
    return total;
}

}  // namespace linger

#include <Eigen/Dense>

namespace linger {

namespace {

struct DualEval {
    double value = 0.0;
    Vector grad;
    Eigen::MatrixXd hess;
};

// F, its gradient and (optionally) its Hessian, accumulated per block in
// block order.
DualEval dual_eval(const LpInstance& in, std::span<const double> x, bool hessian) {
    const std::size_t n = in.n, d = in.d;
    const std::size_t nb = (n + kernels::kBlock - 1) / kernels::kBlock;
    std::vector<double> vals(nb, 0.0), dem(nb * d, 0.0);
    std::vector<Eigen::MatrixXd> hs(hessian ? nb : 0, Eigen::MatrixXd::Zero(d, d));
#pragma omp parallel
    {
        std::vector<double> a(d), w(d);
        Eigen::VectorXd py(d);
#pragma omp for schedule(static)
        for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(nb); ++blk) {
            const std::size_t lo = static_cast<std::size_t>(blk) * kernels::kBlock;
            const std::size_t hi = std::min(n, lo + kernels::kBlock);
            double* acc = dem.data() + static_cast<std::size_t>(blk) * d;
            for (std::size_t i = lo; i < hi; ++i) {
                Softmax s = softmax(in, i, x, a.data(), w.data());
                vals[blk] += s.amax + in.mu * in.pbar[i] * std::log(s.sum);
                const double* pi = in.p.data() + i * d;
                for (std::size_t j = 0; j < d; ++j) {
                    py[j] = pi[j] * (w[j] / s.sum);
                    acc[j] += py[j];
                }
                if (hessian) {
                    const double c = 1.0 / (in.mu * in.pbar[i]);
                    auto& H = hs[blk];
                    for (std::size_t j = 0; j < d; ++j) {
                        if (py[j] == 0.0) continue;
                        H(j, j) += c * pi[j] * py[j];
                        for (std::size_t k = 0; k < d; ++k) H(j, k) -= c * py[j] * py[k];
                    }
                }
            }
        }
    }
    DualEval out;
    out.value = dot(x, in.b);
    out.grad = in.b;
    if (hessian) out.hess = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t blk = 0; blk < nb; ++blk) {
        out.value += vals[blk];
        for (std::size_t j = 0; j < d; ++j) out.grad[j] -= dem[blk * d + j];
        if (hessian) out.hess += hs[blk];
    }
    return out;
}

}  // namespace

LpReference lp_newton_reference(const LpInstance& in, double pg_tol, std::size_t max_iter, Vector x0) {
    const std::size_t d = in.d;
    Vector x = x0.empty() ? Vector(d, 0.0) : std::move(x0);
    for (double& v : x) v = std::max(0.0, v);
    double lam = 1.0;
    LpReference ref;
    DualEval cur = dual_eval(in, x, true);
    for (std::size_t it = 0; it < max_iter; ++it) {
        ref.iterations = it;
        std::vector<std::size_t> free;
        double pg = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (x[j] <= 0.0 && cur.grad[j] > 0.0) continue;
            free.push_back(j);
            pg = std::max(pg, std::abs(cur.grad[j]));
        }
        ref.pg_norm = pg;
        if (pg < pg_tol) break;
        const auto m = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd Hf(m, m);
        Eigen::VectorXd gf(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            gf[a] = cur.grad[free[a]];
            for (Eigen::Index b = 0; b < m; ++b) Hf(a, b) = cur.hess(free[a], free[b]);
        }
        bool moved = false;
        Vector xn(d);
        while (lam < 1e30) {
            Eigen::MatrixXd A = Hf;
            A.diagonal().array() += lam;
            Eigen::VectorXd step = A.ldlt().solve(gf);
            xn = x;
            for (Eigen::Index a = 0; a < m; ++a) xn[free[a]] = std::max(0.0, x[free[a]] - step[a]);
            DualEval next = dual_eval(in, xn, false);
            if (next.value < cur.value) {
                moved = true;
                break;
            }
            lam *= 4.0;
        }
        if (!moved) break;
        x = xn;
        lam = std::max(lam / 4.0, 1e-12);
        cur = dual_eval(in, x, true);
    }
    ref.value = cur.value;
    ref.x = x;
    ref.dual_bound = lp_dual_bound(in, x);
    ref.revenue = truncated_revenue(in, x);
    return ref;
}

}  // namespace linger
