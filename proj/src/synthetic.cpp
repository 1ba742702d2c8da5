#include "linger/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "linger/kernels.hpp"

namespace linger {

QuadraticProblem::QuadraticProblem(std::size_t n, std::size_t d, Vector M, Vector centers, double L)
    : n_(n), d_(d), M_(std::move(M)), H_(d * d, 0.0), c_(std::move(centers)), xstar_(d, 0.0), L_(L) {
    if (M_.size() != d * d || c_.size() != n * d || n == 0)
        throw std::invalid_argument("quadratic: shape mismatch");
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += M_[k * d + a] * M_[k * d + b];
            H_[a * d + b] = s;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) xstar_[j] += c_[i * d + j];
    for (double& v : xstar_) v /= static_cast<double>(n);
}

double QuadraticProblem::value(std::size_t i, std::span<const double> x) const {
    double total = 0.0;
    for (std::size_t k = 0; k < d_; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < d_; ++j) s += M_[k * d_ + j] * (x[j] - c_[i * d_ + j]);
        total += s * s;
    }
    return 0.5 * total;
}

double QuadraticProblem::data_gradient(std::size_t i, std::span<const double> x,
                                       std::span<double> g) const {
    for (std::size_t a = 0; a < d_; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < d_; ++b) s += H_[a * d_ + b] * (x[b] - c_[i * d_ + b]);
        g[a] = s;
    }
    return 0.0;
}

double QuadraticProblem::optimum() const { return full_objective(*this, xstar_); }

namespace {

double huber(double t, double w) {
    const double a = std::abs(t);
    return a <= w ? t * t / (2.0 * w) : a - w / 2.0;
}

// max over x of (1/n) sum_i 1[|x - c_i| <= w_i] / w_i, per coordinate.
double kink_smoothness(std::size_t n, std::size_t d, const Vector& c, const Vector& w) {
    double best = 0.0;
    std::vector<std::pair<double, double>> events;
    for (std::size_t j = 0; j < d; ++j) {
        events.clear();
        for (std::size_t i = 0; i < n; ++i) {
            events.emplace_back(c[i * d + j] - w[i], 1.0 / w[i]);
            events.emplace_back(c[i * d + j] + w[i], -1.0 / w[i]);
        }
        // Closed intervals: at equal positions, openings come before closings.
        std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first < b.first : a.second > b.second;
        });
        double cur = 0.0;
        for (const auto& e : events) {
            cur += e.second;
            best = std::max(best, cur);
        }
    }
    return best / static_cast<double>(n);
}

}  // namespace

KinkProblem::KinkProblem(std::size_t n, std::size_t d, Vector centers, Vector widths,
                         std::string label)
    : n_(n), d_(d), c_(std::move(centers)), w_(std::move(widths)), label_(std::move(label)) {
    if (n == 0 || d == 0 || c_.size() != n * d || w_.size() != n)
        throw std::invalid_argument("kink: shape mismatch");
    for (double w : w_)
        if (!(w > 0.0)) throw std::invalid_argument("kink: widths must be positive");
    L_ = kink_smoothness(n_, d_, c_, w_);
}

double KinkProblem::value(std::size_t i, std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
        const double c = c_[i * d_ + j];
        s += huber(x[j] - c, w_[i]) - huber(c, w_[i]);
    }
    return s;
}

double KinkProblem::data_gradient(std::size_t i, std::span<const double> x,
                                  std::span<double> g) const {
    const double w = w_[i];
    double r = kInf;
    for (std::size_t j = 0; j < d_; ++j) {
        const double t = x[j] - c_[i * d_ + j];
        g[j] = std::clamp(t / w, -1.0, 1.0);
        r = std::min(r, std::max(0.0, std::abs(t) - w));
    }
    return r;
}

double KinkProblem::radius(std::size_t i, std::span<const double> x) const {
    double r = kInf;
    for (std::size_t j = 0; j < d_; ++j)
        r = std::min(r, std::max(0.0, std::abs(x[j] - c_[i * d_ + j]) - w_[i]));
    return r;
}

KinkProblem make_cubic_kinks(std::size_t n) {
    if (n < 2 || n % 2) throw std::invalid_argument("make_cubic_kinks needs an even n >= 2");
    const std::size_t h = n / 2;
    Vector pos(h);
    for (std::size_t k = 0; k < h; ++k)
        pos[k] = std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(h));
    Vector c(n), w(n);
    for (std::size_t k = 0; k < h; ++k) {
        const double lo = k == 0 ? -pos[0] : pos[k - 1];
        const double hi = k + 1 < h ? pos[k + 1] : 2.0 * pos[k] - pos[k - (k > 0)];
        const double spacing = std::max(0.5 * (hi - lo), 1e-12);
        c[2 * k] = pos[k];
        c[2 * k + 1] = -pos[k];
        w[2 * k] = w[2 * k + 1] = spacing;
    }
    return KinkProblem(n, 1, std::move(c), std::move(w), "cubic-kink");
}

KinkProblem make_uniform_kinks(std::size_t n, std::size_t d, double w, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector c(n * d);
    for (double& v : c) v = u(gen);
    return KinkProblem(n, d, std::move(c), Vector(n, w), "uniform-kink");
}

std::vector<double> profile_B(const Problem& p, std::span<const double> x,
                              std::span<const double> rs) {
    Vector radii(p.n());
    kernels::all_radii(p, x, radii);
    std::sort(radii.begin(), radii.end());
    std::vector<double> out;
    out.reserve(rs.size());
    for (double r : rs) {
        const auto below = std::lower_bound(radii.begin(), radii.end(), r) - radii.begin();
        out.push_back(static_cast<double>(below) / static_cast<double>(p.n()));
    }
    return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t m = x.size();
    if (m < 2 || y.size() != m) throw std::invalid_argument("fit_line needs >= 2 matching points");
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 && sxx > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

}  // namespace linger
