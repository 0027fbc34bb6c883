#include "conedelta/weyl.hpp"

#include <algorithm>
#include <cmath>

#include "conedelta/errors.hpp"
#include "conedelta/quadrature.hpp"

namespace conedelta::weyl {

namespace {

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

quad::Options opts_1d() {
    quad::Options o;
    o.rel_tol = 1e-12;
    o.abs_tol = 1e-15;
    o.max_intervals = 20000;
    return o;
}

}  // namespace

WeylFunction WeylFunction::make(std::uint64_t n, double p, const ConeModel& model, double eps) {
    if (n < 1) throw InvalidInputError("WeylFunction: n >= 1 required");
    if (!(eps > 0.0 && eps < std::tan(model.theta)))
        throw InvalidInputError("WeylFunction: requires eps in (0, tan(theta))");
    return WeylFunction{n, p, model, eps, profiles::make_bump(1.0, 2.0),
                        profiles::make_plateau(eps)};
}

WeylFunction WeylFunction::make(std::uint64_t n, double p, const ConeModel& model) {
    return make(n, p, model, std::min(0.5, 0.5 * std::tan(model.theta)));
}

double WeylFunction::rho() const {
    const double nd = static_cast<double>(n);
    return nd * (std::sin(model.theta) - eps * std::cos(model.theta));
}

std::pair<double, double> WeylFunction::s_support() const {
    const double nd = static_cast<double>(n);
    return {nd, 2.0 * nd};
}

std::pair<double, double> WeylFunction::t_support() const {
    const double nd = static_cast<double>(n);
    return {-eps * nd, eps * nd};
}

std::pair<double, double> weyl_norms(std::uint64_t n, double p, const ConeModel& model) {
    const auto w = WeylFunction::make(n, p, model);
    const double nd = static_cast<double>(n);
    const double al = model.alpha;
    const double tmax = w.eps * nd;
    const auto o = opts_1d();

    auto Tn = quad::integrate_segments(
        [&](double t) {
            const double c = w.chi2.eval(t / nd);
            return 2.0 * c * c * std::exp(-al * t);
        },
        {0.0, std::min(0.5 * tmax, 12.0 / al), 0.5 * tmax, tmax}, o);
    auto Zn = quad::integrate(
        [&](double t) {
            const double d = w.chi2.d1(t / nd) / nd;
            return 2.0 * d * d * std::exp(-al * t);
        },
        0.5 * tmax, tmax, o);
    if (!Tn.converged || !Zn.converged)
        throw NumericalFailure("weyl_norms: quadrature did not converge");

    const double l2 = w.chi1.l2_norm_sq();  // 1 (normalized)
    const double g1 = w.chi1.grad_sq();
    const double norm_sq = l2 * Tn.value;
    // exact t-integration by parts (chi2(0)=1): int (d/dt[chi2 e^{-a|t|/2}])^2
    //   = Z + a - (a^2/4) T
    const double grad_sq = (g1 / (nd * nd) + p * p * l2) * Tn.value +
                           l2 * (Zn.value + al - 0.25 * al * al * Tn.value);
    return {norm_sq, grad_sq};
}

DefectReport weyl_defect(std::uint64_t n, double p, const ConeModel& model, double detune) {
    const auto w = WeylFunction::make(n, p, model);
    const double nd = static_cast<double>(n);
    const double al = model.alpha;
    const double th = model.theta;
    const double tmax = w.eps * nd;

    DefectReport rep;
    rep.n = n;
    rep.p = p;
    rep.target_energy = p * p - 0.25 * al * al;
    rep.detune = detune;
    auto [nsq, gsq] = weyl_norms(n, p, model);
    rep.norm_sq = nsq;
    rep.grad_sq = gsq;

    // Piecewise residual of (-d_s^2 - d_t^2 - 1/(4r^2) - E) w off the ray,
    // E = target + detune; common factor (1/sqrt(n)) e^{ips} e^{-a|t|/2}:
    //   real: -(1/n^2)(chi1'' chi2 + chi1 chi2'') + (a sgn(t)/n) chi1 chi2'
    //         - chi1 chi2 / (4 r^2) - detune chi1 chi2
    //   imag: -(2p/n) chi1' chi2
    auto dens = [&](double s, double t) {
        const double u = s / nd, v = t / nd;
        const double c1 = w.chi1.eval(u), c1p = w.chi1.d1(u), c1pp = w.chi1.d2(u);
        const double c2 = w.chi2.eval(v), c2p = w.chi2.d1(v), c2pp = w.chi2.d2(v);
        const double r = geom::weight_r(s, t, th);
        const double re = -(c1pp * c2 + c1 * c2pp) / (nd * nd) +
                          (al * sgn(t) / nd) * c1 * c2p - c1 * c2 / (4.0 * r * r) -
                          detune * c1 * c2;
        const double im = -(2.0 * p / nd) * c1p * c2;
        return (re * re + im * im) * std::exp(-al * std::fabs(t)) / nd;
    };
    quad::Options o;
    o.rel_tol = 1e-9;
    o.abs_tol = 1e-14;
    o.max_intervals = 40000;
    std::vector<double> tb{-tmax, -0.5 * tmax, 0.0, 0.5 * tmax, tmax};
    const double decay = 12.0 / al;
    if (decay < 0.5 * tmax) {
        tb.push_back(-decay);
        tb.push_back(decay);
        std::sort(tb.begin(), tb.end());
    }
    auto D = quad::integrate2d(dens, nd, 2.0 * nd, tb, o);
    if (!D.converged) throw NumericalFailure("weyl_defect: residual quadrature did not converge");
    rep.defect = std::sqrt(std::max(0.0, D.value) / rep.norm_sq);
    rep.quad_error = D.error;
    return rep;
}

double jump_residual(const WeylFunction& w, int samples) {
    const double nd = static_cast<double>(w.n);
    const double al = w.model.alpha;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = nd + (static_cast<double>(i) + 0.5) / samples * nd;
        const double amp = w.chi1.eval(s / nd) / std::sqrt(nd);  // |w(s,0)| modulus factor
        const double dplus = amp * (w.chi2.d1(0.0) / nd - 0.5 * al * w.chi2.eval(0.0));
        const double dminus = amp * (w.chi2.d1(0.0) / nd + 0.5 * al * w.chi2.eval(0.0));
        const double res = std::fabs(dplus - dminus + al * amp * w.chi2.eval(0.0));
        worst = std::max(worst, res);
    }
    return worst;
}

SweepResult weyl_sweep(double p, const std::vector<std::uint64_t>& n_list,
                       const ConeModel& model, double detune) {
    if (n_list.size() < 1) throw InvalidInputError("weyl_sweep: empty n list");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw InvalidInputError("weyl_sweep: n list must be ascending");
    SweepResult out;
    out.reports.reserve(n_list.size());
    for (auto n : n_list) out.reports.push_back(weyl_defect(n, p, model, detune));
    // least-squares fit of log defect = log C - q log n
    if (n_list.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(n_list.size());
        for (const auto& r : out.reports) {
            const double x = std::log(static_cast<double>(r.n));
            const double y = std::log(std::max(r.defect, 1e-300));
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        out.fitted_decay_exponent = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return out;
}

}  // namespace conedelta::weyl
