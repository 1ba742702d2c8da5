#include "linger/svm.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace linger {

double SvmDataset::margin(std::size_t i, std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    return labels[i] * s;
}

void SvmDataset::add_row(double label, const std::vector<std::pair<std::uint32_t, double>>& entries) {
    double sq = 0.0;
    for (auto [j, v] : entries) {
        col.push_back(j);
        val.push_back(v);
        sq += v * v;
        d = std::max<std::size_t>(d, j + 1);
    }
    row_ptr.push_back(col.size());
    labels.push_back(label);
    row_norms.push_back(std::sqrt(sq));
    ++n;
}

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& tok, const std::string& source, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE || !std::isfinite(v))
        fail(source, line, "not a number: '" + tok + "'");
    return v;
}

SvmDataset parse_stream(std::istream& is, const ParseOptions& opt, const std::string& source) {
    SvmDataset ds;
    std::string text;
    std::size_t lineno = 0;
    std::vector<std::pair<std::uint32_t, double>> entries;
    while (std::getline(is, text)) {
        ++lineno;
        if (auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
        std::istringstream ls(text);
        std::string tok;
        if (!(ls >> tok)) continue;
        double label = parse_number(tok, source, lineno);
        if (label == 0.0 && opt.map_zero_label) label = -1.0;
        if (label != 1.0 && label != -1.0) fail(source, lineno, "label must be +1 or -1, got '" + tok + "'");
        entries.clear();
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) fail(source, lineno, "expected idx:val, got '" + tok + "'");
            const std::string idx = tok.substr(0, colon);
            char* end = nullptr;
            errno = 0;
            const long long j = std::strtoll(idx.c_str(), &end, 10);
            if (idx.empty() || end != idx.c_str() + idx.size() || errno == ERANGE)
                fail(source, lineno, "bad index '" + idx + "'");
            if (j <= 0) fail(source, lineno, "index must be positive, got " + idx);
            if (j > 0xffffffffLL) fail(source, lineno, "index too large: " + idx);
            const double v = parse_number(tok.substr(colon + 1), source, lineno);
            if (v != 0.0) entries.emplace_back(static_cast<std::uint32_t>(j - 1), v);
        }
        std::sort(entries.begin(), entries.end());
        for (std::size_t k = 1; k < entries.size(); ++k)
            if (entries[k].first == entries[k - 1].first)
                fail(source, lineno, "duplicate index " + std::to_string(entries[k].first + 1));
        ds.add_row(label, entries);
    }
    if (ds.n == 0) throw std::runtime_error(source + ": no data rows");
    ds.d = std::max(ds.d, opt.min_dim);
    return ds;
}

}  // namespace

SvmDataset parse_libsvm(const std::string& path, const ParseOptions& opt) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    return parse_stream(is, opt, path);
}

SvmDataset parse_libsvm_text(const std::string& text, const ParseOptions& opt,
                             const std::string& source) {
    std::istringstream is(text);
    return parse_stream(is, opt, source);
}

void rescale(SvmDataset& ds) {
    const double total = std::accumulate(ds.row_norms.begin(), ds.row_norms.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("rescale: all rows are zero");
    const double s = static_cast<double>(ds.n) / total;
    for (double& v : ds.val) v *= s;
    for (double& r : ds.row_norms) r *= s;
}

SvmProblem::SvmProblem(std::shared_ptr<const SvmDataset> ds, MiddleZone middle)
    : ds_(std::move(ds)), middle_(middle) {
    if (!ds_ || ds_->n == 0) throw std::invalid_argument("svm: empty dataset");
    if (ds_->mu_smooth < 0.0) throw std::invalid_argument("svm: smoothing must be >= 0");
    lambda_ = ds_->lambda > 0.0 ? ds_->lambda : 1.0 / static_cast<double>(ds_->n);
}

std::optional<double> SvmProblem::smoothness() const {
    if (ds_->mu_smooth <= 0.0) return std::nullopt;
    const double r = *std::max_element(ds_->row_norms.begin(), ds_->row_norms.end());
    return lambda_ + r * r / ds_->mu_smooth;
}

double SvmProblem::hinge(double m) const {
    const double mu = ds_->mu_smooth;
    if (m >= 1.0) return 0.0;
    if (m <= 1.0 - mu) return (1.0 - m) - mu / 2.0;
    return (1.0 - m) * (1.0 - m) / (2.0 * mu);
}

double SvmProblem::hinge_slope(double m) const {
    const double mu = ds_->mu_smooth;
    if (m >= 1.0) return 0.0;
    if (m <= 1.0 - mu) return -1.0;
    return -(1.0 - m) / mu;
}

double SvmProblem::radius_at_margin(std::size_t i, double m) const {
    const double r = ds_->row_norms[i];
    if (r == 0.0) return kInf;
    const double mu = ds_->mu_smooth;
    if (m >= 1.0) return (m - 1.0) / r;
    if (m <= 1.0 - mu) return (1.0 - mu - m) / r;
    return middle_ == MiddleZone::infinite ? kInf : 0.0;
}

double SvmProblem::value(std::size_t i, std::span<const double> x) const {
    return 0.5 * lambda_ * dot(x, x) + hinge(ds_->margin(i, x));
}

double SvmProblem::data_gradient(std::size_t i, std::span<const double> x,
                                 std::span<double> g) const {
    std::fill(g.begin(), g.end(), 0.0);
    const double m = ds_->margin(i, x);
    const double c = hinge_slope(m) * ds_->labels[i];
    if (c != 0.0)
        for (std::size_t k = ds_->row_ptr[i]; k < ds_->row_ptr[i + 1]; ++k)
            g[ds_->col[k]] = c * ds_->val[k];
    return radius_at_margin(i, m);
}

double SvmProblem::radius(std::size_t i, std::span<const double> x) const {
    return radius_at_margin(i, ds_->margin(i, x));
}

void SvmProblem::add_shared_gradient(std::span<const double> x, std::span<double> g) const {
    axpy(lambda_, x, g);
}

SvmReference svm_dual_reference(const SvmProblem& p, double gap_tol, std::size_t max_epochs,
                                std::uint64_t seed) {
    const SvmDataset& ds = p.dataset();
    const std::size_t n = ds.n, d = ds.d;
    const double lambda = p.lambda();
    const double C = 1.0 / (lambda * static_cast<double>(n));
    const double diag = ds.mu_smooth / C;
    std::vector<double> alpha(n, 0.0);
    Vector w(d, 0.0);
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::mt19937_64 gen(seed);

    // Objective-unit values: f = lambda * P(w) and the dual bound lambda * D(alpha).
    auto primal = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p.hinge(ds.margin(i, w));
        return 0.5 * lambda * dot(w, w) + s / static_cast<double>(n);
    };
    auto dual = [&] {
        double s = 0.0;
        for (double a : alpha) s += a - diag * a * a / 2.0;
        return lambda * (s - 0.5 * dot(w, w));
    };

    SvmReference ref;
    for (std::size_t epoch = 1; epoch <= max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), gen);
        for (std::uint32_t i : order) {
            const double q = ds.row_norms[i] * ds.row_norms[i] + diag;
            if (q == 0.0) continue;
            const double grad = ds.margin(i, w) - 1.0 + diag * alpha[i];
            const double next = std::clamp(alpha[i] - grad / q, 0.0, C);
            const double delta = (next - alpha[i]) * ds.labels[i];
            if (delta == 0.0) continue;
            alpha[i] = next;
            for (std::size_t k = ds.row_ptr[i]; k < ds.row_ptr[i + 1]; ++k) w[ds.col[k]] += delta * ds.val[k];
        }
        if (epoch % 10 == 0 || epoch == max_epochs) {
            ref.epochs = epoch;
            ref.primal = primal();
            ref.dual = dual();
            if (ref.primal - ref.dual <= gap_tol) break;
        }
    }
    ref.x = std::move(w);
    return ref;
}

SvmDataset generate_gaussian(const GaussianSpec& spec) {
    if (!(spec.sigma > 0.0) || !(spec.kappa >= 1.0) || spec.n == 0 || spec.d == 0)
        throw std::invalid_argument("generate_gaussian: need n, d > 0, sigma > 0, kappa >= 1");
    std::mt19937_64 gen(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    const double rd = std::sqrt(static_cast<double>(spec.d));
    Vector u(spec.d);
    for (double& v : u) v = normal(gen);
    const double un = norm(u, NormKind::euclidean);
    const double target = spec.mean_fraction * spec.kappa * spec.sigma / rd;
    for (double& v : u) v *= target / un;

    SvmDataset ds;
    std::vector<std::pair<std::uint32_t, double>> row(spec.d);
    const double noise = spec.sigma / rd;
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double b = coin(gen) ? 1.0 : -1.0;
        for (std::size_t j = 0; j < spec.d; ++j)
            row[j] = {static_cast<std::uint32_t>(j), b * u[j] + noise * normal(gen)};
        ds.add_row(b, row);
    }
    ds.d = spec.d;
    return ds;
}

}  // namespace linger
