#include "linger/studies.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "linger/baselines.hpp"
#include "linger/gdlin.hpp"
#include "linger/svm.hpp"
#include "linger/svrglin.hpp"

namespace linger {

CurveFit fit_curve(std::vector<RunRecord> records, double err_lo, double err_hi) {
    CurveFit out;
    std::vector<double> cube, logt, loge;
    for (const auto& r : records) {
        if (r.pass_count < 1.0 || !(r.objective_error >= err_lo && r.objective_error <= err_hi)) continue;
        cube.push_back(std::cbrt(r.pass_count));
        logt.push_back(std::log(r.pass_count));
        loge.push_back(std::log(r.objective_error));
    }
    out.points = loge.size();
    if (out.points >= 2) {
        out.cube_root = fit_line(cube, loge);
        out.log_log = fit_line(logt, loge);
    }
    out.records = std::move(records);
    return out;
}

RateShapeResult rate_shape_study(const RateShapeOptions& opt) {
    const KinkProblem p = make_cubic_kinks(opt.n);
    RateShapeResult out;
    out.L = *p.smoothness();
    MonitorOptions mo;
    mo.pass_budget = opt.budget;
    mo.checkpoint_passes = 1.0;

    {
        GradMeter meter(p.n());
        Monitor mon(p, meter, mo);
        GdLinConfig c;
        c.mode = GdLinMode::theoretical;
        c.C = c.D = std::abs(opt.x0);
        c.L = out.L;
        c.S = 1000000;
        c.x0 = {opt.x0};
        run_gdlin(p, c, meter, mon);
        auto recs = mon.records();
        apply_reference(recs, 0.0, false);
        out.gdlin = fit_curve(std::move(recs), opt.err_lo, opt.err_hi);
    }
    {
        GradMeter meter(p.n());
        Monitor mon(p, meter, mo);
        BaselineConfig c;
        c.method = BaselineMethod::gd;
        c.eta = 1.0 / out.L;
        c.x0 = {opt.x0};
        run_baseline(p, c, meter, mon);
        auto recs = mon.records();
        apply_reference(recs, 0.0, false);
        out.gd = fit_curve(std::move(recs), opt.err_lo, opt.err_hi);
    }
    return out;
}

GaussianProfileResult gaussian_profile_study(const GaussianProfileOptions& opt) {
    GaussianSpec gs;
    gs.n = opt.n;
    gs.d = opt.d;
    gs.sigma = opt.sigma;
    gs.kappa = opt.kappa;
    gs.seed = opt.seed;
    auto ds = std::make_shared<SvmDataset>(generate_gaussian(gs));
    const SvmProblem p(ds);

    GradMeter meter(p.n());
    MonitorOptions mo;
    mo.pass_budget = opt.budget;
    mo.checkpoint_passes = 1.0;
    mo.keep_points = true;
    Monitor mon(p, meter, mo);
    SvrgLinConfig c;
    c.eta = opt.eta;
    c.seed = opt.seed;
    run_svrglin(p, c, meter, mon);

    GaussianProfileResult out;
    out.final_objective = mon.records().back().objective;
    for (std::size_t k = 1; k <= opt.r_steps; ++k)
        out.radii.push_back(opt.r_max * static_cast<double>(k) / static_cast<double>(opt.r_steps));
    const auto& pts = mon.points();
    const std::size_t take = std::min(opt.trajectory_points, pts.size());
    std::vector<double> xs, ys;
    for (std::size_t k = pts.size() - take; k < pts.size(); ++k) {
        auto prof = profile_B(p, pts[k], out.radii);
        for (std::size_t q = 0; q < prof.size(); ++q) {
            xs.push_back(out.radii[q]);
            ys.push_back(prof[q]);
        }
        out.profiles.push_back(std::move(prof));
    }
    const LineFit f = fit_line(xs, ys);
    out.c1 = f.slope;
    out.c2 = f.intercept;
    return out;
}

std::vector<double> log_radii(double r_lo, double r_hi, std::size_t count) {
    if (!(r_lo > 0.0 && r_hi > r_lo) || count < 2) throw std::invalid_argument("log_radii: bad range");
    std::vector<double> out(count);
    const double step = std::log(r_hi / r_lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) out[k] = r_lo * std::exp(step * static_cast<double>(k));
    return out;
}

}  // namespace linger
