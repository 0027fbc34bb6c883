#include "conedelta/trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conedelta/errors.hpp"
#include "conedelta/quadrature.hpp"

namespace conedelta::trial {

namespace {

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

void check_support_positivity(double s_lo, double t_lo, double theta, const char* what) {
    // r is affine in (s,t), so the minimum over the support box is at a corner.
    if (geom::weight_r(s_lo, t_lo, theta) <= 0.0)
        throw InvalidInputError(std::string(what) +
                                ": support leaves the half-plane r > 0 (eps too large)");
}

}  // namespace

double default_discrete_eps(std::uint64_t n, const ConeModel& model) {
    const double sqn = std::sqrt(static_cast<double>(n));
    const double tn = std::tan(model.theta);
    const double lo = std::min(0.5, 0.5 * tn);
    const double want = (8.0 + 9.0 * std::log(static_cast<double>(n))) / (model.alpha * sqn);
    return std::min(0.85 * sqn * tn, std::max(lo, want));
}

TrialFunction TrialFunction::discrete(std::uint64_t n, const ConeModel& model,
                                      const profiles::SmoothProfile& chi1, double eps) {
    if (n < 1) throw InvalidInputError("TrialFunction::discrete: n >= 1 required");
    if (!(eps > 0.0)) throw InvalidInputError("TrialFunction::discrete: eps > 0 required");
    const double sqn = std::sqrt(static_cast<double>(n));
    if (!(eps * sqn < static_cast<double>(n) * std::tan(model.theta)))
        throw InvalidInputError("TrialFunction::discrete: requires eps*sqrt(n) < n*tan(theta)");
    TrialFunction f{Family::discrete, n,    0.0,        chi1,
                    profiles::make_plateau(eps), model.alpha, model.theta, eps};
    check_support_positivity(static_cast<double>(n), -eps * sqn, model.theta,
                             "TrialFunction::discrete");
    return f;
}

TrialFunction TrialFunction::discrete(std::uint64_t n, const ConeModel& model,
                                      const profiles::SmoothProfile& chi1) {
    return discrete(n, model, chi1, default_discrete_eps(n, model));
}

TrialFunction TrialFunction::essential(std::uint64_t n, double p, const ConeModel& model,
                                       double eps) {
    if (n < 1) throw InvalidInputError("TrialFunction::essential: n >= 1 required");
    if (!(eps > 0.0 && eps < std::tan(model.theta)))
        throw InvalidInputError("TrialFunction::essential: requires eps in (0, tan(theta))");
    TrialFunction f{Family::essential, n, p, profiles::make_bump(1.0, 2.0),
                    profiles::make_plateau(eps), model.alpha, model.theta, eps};
    check_support_positivity(static_cast<double>(n), -eps * static_cast<double>(n), model.theta,
                             "TrialFunction::essential");
    return f;
}

TrialFunction TrialFunction::essential(std::uint64_t n, double p, const ConeModel& model) {
    return essential(n, p, model, std::min(0.5, 0.5 * std::tan(model.theta)));
}

std::pair<double, double> TrialFunction::s_support() const {
    const double nd = static_cast<double>(n);
    if (family == Family::discrete) return {nd, nd + nd * nd};
    return {nd, 2.0 * nd};
}

std::pair<double, double> TrialFunction::t_support() const {
    const double nd = static_cast<double>(n);
    const double half = family == Family::discrete ? eps * std::sqrt(nd) : eps * nd;
    return {-half, half};
}

ScalarField TrialFunction::field() const {
    if (family == Family::essential && p != 0.0)
        throw InvalidInputError("TrialFunction::field: complex member (p != 0); "
                                "use the weyl module for essential-family defects");
    ScalarField f;
    auto [s0, s1] = s_support();
    auto [t0, t1] = t_support();
    f.s_lo = s0; f.s_hi = s1; f.t_lo = t0; f.t_hi = t1;
    const double nd = static_cast<double>(n);
    const double a = alpha;
    const profiles::SmoothProfile c1 = chi1, c2 = chi2;
    if (family == Family::discrete) {
        const double n2 = nd * nd, sqn = std::sqrt(nd);
        f.value = [=](double s, double t) {
            return (1.0 / nd) * c1.eval((s - nd) / n2) * c2.eval(t / sqn) *
                   std::exp(-0.5 * a * std::fabs(t));
        };
        f.ds = [=](double s, double t) {
            return (1.0 / (nd * n2)) * c1.d1((s - nd) / n2) * c2.eval(t / sqn) *
                   std::exp(-0.5 * a * std::fabs(t));
        };
        f.dt = [=](double s, double t) {
            const double e = std::exp(-0.5 * a * std::fabs(t));
            return (1.0 / nd) * c1.eval((s - nd) / n2) *
                   (c2.d1(t / sqn) / sqn - 0.5 * a * sgn(t) * c2.eval(t / sqn)) * e;
        };
    } else {
        const double rt = std::sqrt(nd);
        f.value = [=](double s, double t) {
            return (1.0 / rt) * c1.eval(s / nd) * c2.eval(t / nd) *
                   std::exp(-0.5 * a * std::fabs(t));
        };
        f.ds = [=](double s, double t) {
            return (1.0 / (rt * nd)) * c1.d1(s / nd) * c2.eval(t / nd) *
                   std::exp(-0.5 * a * std::fabs(t));
        };
        f.dt = [=](double s, double t) {
            const double e = std::exp(-0.5 * a * std::fabs(t));
            return (1.0 / rt) * c1.eval(s / nd) *
                   (c2.d1(t / nd) / nd - 0.5 * a * sgn(t) * c2.eval(t / nd)) * e;
        };
    }
    return f;
}

namespace {

quad::Options form_opts() {
    quad::Options o;
    o.rel_tol = 1e-10;
    o.abs_tol = 1e-13;
    o.max_intervals = 20000;
    return o;
}

// Evenly subdivided panels (plus the |t| kink at 0) so that narrow support
// slices cannot fall between the nodes of a single wide panel.
std::vector<double> t_breaks(double t_lo, double t_hi) {
    std::vector<double> b;
    for (int i = 0; i <= 8; ++i) b.push_back(t_lo + (t_hi - t_lo) * i / 8.0);
    if (t_lo < 0.0 && t_hi > 0.0) b.push_back(0.0);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

std::vector<double> s_breaks(double s_lo, double s_hi) {
    std::vector<double> b;
    for (int i = 0; i <= 8; ++i) b.push_back(s_lo + (s_hi - s_lo) * i / 8.0);
    return b;
}

}  // namespace

double reduced_form_value(const ScalarField& w, const ConeModel& model) {
    const double th = model.theta;
    double rmin = w.min_support_r;
    if (!std::isfinite(rmin))
        rmin = std::min(
            std::min(geom::weight_r(w.s_lo, w.t_lo, th), geom::weight_r(w.s_lo, w.t_hi, th)),
            std::min(geom::weight_r(w.s_hi, w.t_lo, th), geom::weight_r(w.s_hi, w.t_hi, th)));
    if (rmin <= 0.0)
        throw InvalidInputError("reduced_form_value: support touches r <= 0");

    const auto opts = form_opts();
    const auto tb = t_breaks(w.t_lo, w.t_hi);
    auto grad = quad::integrate2d(
        [&](double s, double t) {
            const double a = w.ds(s, t), b = w.dt(s, t);
            return a * a + b * b;
        },
        w.s_lo, w.s_hi, tb, opts);
    auto sing = quad::integrate2d(
        [&](double s, double t) {
            const double v = w.value(s, t);
            if (v == 0.0) return 0.0;  // bounding box may exceed the support
            const double r = geom::weight_r(s, t, th);
            return v * v / (4.0 * r * r);
        },
        w.s_lo, w.s_hi, tb, opts);
    double trace = 0.0;
    bool trace_ok = true;
    if (w.t_lo < 0.0 && w.t_hi > 0.0) {
        auto tr = quad::integrate_segments(
            [&](double s) {
                const double v = w.value(s, 0.0);
                return v * v;
            },
            s_breaks(w.s_lo, w.s_hi), opts);
        trace = model.alpha * tr.value;
        trace_ok = tr.converged;
    }
    if (!grad.converged || !sing.converged || !trace_ok)
        throw NumericalFailure("reduced_form_value: quadrature did not converge");
    return grad.value - sing.value - trace;
}

double field_norm_sq(const ScalarField& w) {
    auto r = quad::integrate2d(
        [&](double s, double t) {
            const double v = w.value(s, t);
            return v * v;
        },
        w.s_lo, w.s_hi, t_breaks(w.t_lo, w.t_hi), form_opts());
    if (!r.converged) throw NumericalFailure("field_norm_sq: quadrature did not converge");
    return r.value;
}

double rayleigh_quotient(const ScalarField& w, const ConeModel& model) {
    const double n2 = field_norm_sq(w);
    if (!(n2 > 1e-280)) throw InvalidInputError("rayleigh_quotient: zero-norm field");
    return reduced_form_value(w, model) / n2;
}

SnReport compute_sn(std::uint64_t n, const ConeModel& model,
                    const profiles::SmoothProfile& chi1, const profiles::SmoothProfile& chi2) {
    if (chi1.class_tag() != profiles::ProfileClass::hardy_poly)
        throw InvalidInputError("compute_sn: chi1 must be a hardy_poly profile");
    const auto hc = profiles::hardy_check(chi1, model.theta);
    if (!hc.satisfied)
        throw InvalidInputError("compute_sn: chi1 fails the Hardy condition at this angle");
    if (chi2.class_tag() != profiles::ProfileClass::plateau_cutoff)
        throw InvalidInputError("compute_sn: chi2 must be a plateau_cutoff profile");

    const double nd = static_cast<double>(n);
    const double eps = chi2.parameter();
    const double sqn = std::sqrt(nd);
    const double al = model.alpha;
    const double th = model.theta;
    const double sn_t = std::sin(th), cs_t = std::cos(th);
    if (!(eps * sqn < nd * std::tan(th)))
        throw InvalidInputError("compute_sn: requires eps*sqrt(n) < n*tan(theta)");

    quad::Options o;
    o.rel_tol = 1e-13;
    o.abs_tol = 1e-16;
    o.max_intervals = 20000;

    const double n4 = nd * nd * nd * nd;
    const double l2 = chi1.l2_norm_sq();
    const double g1 = chi1.grad_sq();

    // t-factor integrals (even integrands; integrate half and double);
    // breakpoints track the exponential decay scale so the tail panels cannot
    // hide it from the quadrature nodes when eps*sqrt(n) is huge
    const double tmax = eps * sqn;
    std::vector<double> tb{0.0};
    for (double c : {1.0, 4.0, 12.0, 40.0})
        if (c / al < 0.5 * tmax) tb.push_back(c / al);
    tb.push_back(0.5 * tmax);
    tb.push_back(tmax);
    auto Xr = quad::integrate_segments(
        [&](double t) {
            const double c = chi2.eval(t / sqn);
            return 2.0 * c * c * std::exp(-al * t);
        },
        tb, o);
    auto Zr = quad::integrate(
        [&](double t) {
            const double d = chi2.d1(t / sqn) / sqn;
            return 2.0 * d * d * std::exp(-al * t);
        },
        0.5 * tmax, tmax, o);

    // on-ray singular factor: H_n = int_0^1 chi1(u)^2 / (u + 1/n)^2 du
    auto Hr = quad::integrate_segments(
        [&](double u) {
            const double c = chi1.eval(u);
            const double d = u + 1.0 / nd;
            return c * c / (d * d);
        },
        {0.0, std::min(1.0, 10.0 / nd), 1.0}, o);

    if (!Xr.converged || !Zr.converged || !Hr.converged)
        throw NumericalFailure("compute_sn: factor quadrature did not converge");

    SnReport rep;
    rep.n = n;
    rep.eps = eps;

    const double X = Xr.value, Z = Zr.value, H = Hr.value;
    const double inv4s2 = 1.0 / (4.0 * sn_t * sn_t);

    // gradient via the exact t-integration-by-parts identity
    // (chi2(0)=1, chi2'(0)=0, compact support):
    //   int (d/dt[chi2 e^{-a|t|/2}])^2 dt = Z + a - (a^2/4) X
    rep.grad_term = (g1 / n4) * X + l2 * (Z + al - 0.25 * al * al * X);
    rep.norm_term = 0.25 * al * al * l2 * X;
    rep.trace_term = al * l2;  // chi2(0)^2 = 1, exact
    rep.i_n = inv4s2 * H * X / n4;

    double j_err = 0.0;
    if (n <= 200000) {
        // radius-variation remainder, evenized in t (odd part cancels exactly)
        quad::Options o2;
        o2.rel_tol = 1e-9;
        o2.abs_tol = 1e-3 * (rep.i_n + 1e-300);
        o2.max_intervals = 20000;
        auto Jr = quad::integrate2d(
            [&](double u, double t) {
                const double c1 = chi1.eval(u);
                const double s = nd + nd * nd * u;
                const double r0 = s * sn_t;
                const double rp = r0 + t * cs_t;
                const double rm = r0 - t * cs_t;
                const double c2v = chi2.eval(t / sqn);
                const double k = 0.25 * (1.0 / (rp * rp) + 1.0 / (rm * rm) - 2.0 / (r0 * r0));
                return c1 * c1 * k * c2v * c2v * std::exp(-al * t);
            },
            0.0, 1.0, {0.0, std::min(tmax, 10.0 / al), tmax}, o2);
        if (!Jr.converged)
            throw NumericalFailure("compute_sn: j_n quadrature did not converge");
        rep.j_n = Jr.value;
        j_err = Jr.error;
    } else {
        // |J_n| <= (2a/(b sqrt(n)) + a^2/(b^2 n)) I_n with a = eps cos(theta),
        // b = sin(theta) - eps cos(theta)/sqrt(n)  (support positivity gives b > 0)
        const double a_c = eps * cs_t;
        const double b_c = sn_t - eps * cs_t / sqn;
        rep.j_n = 0.0;
        rep.j_by_bound = true;
        j_err = (2.0 * a_c / (b_c * sqn) + a_c * a_c / (b_c * b_c * nd)) * rep.i_n;
    }

    rep.sing_term = rep.i_n + rep.j_n;
    rep.s_n = rep.grad_term - rep.sing_term - rep.trace_term + rep.norm_term;
    // Cancellation-free route for the scaled value: the alpha-scale pieces of
    // grad - trace + norm cancel exactly (chi2(0)=1), leaving
    //   s_n = (g1/n^4) X + l2 Z - i_n - j_n.
    // The literal four-term sum above carries O(eps_mach) absolute noise, which
    // n^4 would amplify; s_n_scaled uses the stable form instead.
    rep.s_n_scaled = ((g1 * X) / n4 + l2 * Z - rep.i_n - rep.j_n) * n4;
    rep.err_scaled = Xr.error * (g1 + inv4s2 * H) + n4 * l2 * Zr.error +
                     Hr.error * inv4s2 * X + n4 * j_err;
    return rep;
}

SnReport compute_sn(std::uint64_t n, const ConeModel& model,
                    const profiles::SmoothProfile& chi1) {
    return compute_sn(n, model, chi1, profiles::make_plateau(default_discrete_eps(n, model)));
}

double sn_limit(const ConeModel& model, const profiles::SmoothProfile& chi1) {
    const auto hc = profiles::hardy_check(chi1, model.theta);
    if (!hc.satisfied)
        throw InvalidInputError("sn_limit: Hardy condition fails; the limit is not negative");
    const double s = std::sin(model.theta);
    return (2.0 / model.alpha) * (hc.grad_sq - hc.hardy_int / (4.0 * s * s));
}

Certificate build_certificate(const ConeModel& model, const profiles::SmoothProfile& chi1,
                              int k_max, double safety, std::uint64_t n_cap) {
    if (k_max < 1) throw InvalidInputError("build_certificate: k_max >= 1 required");
    if (!(safety > 0.0 && safety < 1.0))
        throw InvalidInputError("build_certificate: safety must lie in (0,1)");

    Certificate cert;
    cert.alpha = model.alpha;
    cert.theta = model.theta;
    cert.chi1_desc = chi1.describe();
    cert.safety = safety;
    cert.limit_L = sn_limit(model, chi1);  // throws when the Hardy gate fails
    cert.gamma = -model.alpha * cert.limit_L * safety / 2.0;

    const double target = cert.limit_L * safety;          // S_n n^4 <= target
    const double err_gate = 0.1 * std::fabs(target);

    auto ok = [&](std::uint64_t n) {
        const auto rep = compute_sn(n, model, chi1);
        return rep.s_n_scaled <= target && rep.err_scaled <= err_gate;
    };

    std::uint64_t hi = 8;
    while (hi <= n_cap && !ok(hi)) hi *= 2;
    if (hi > n_cap) {
        std::ostringstream os;
        os << "build_certificate: no n <= " << n_cap << " reaches S_n*n^4 <= " << target
           << " within the quadrature-error gate";
        throw NumericalFailure(os.str());
    }
    // smallest n with ok(n), assuming a single false->true crossing; ok(hi)
    // stays true throughout
    std::uint64_t lo = hi == 8 ? 1 : hi / 2;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    cert.n_start = hi;

    std::uint64_t nk = cert.n_start;
    for (int k = 0; k < k_max; ++k) {
        if (k > 0) {
            if (nk > 4294967294ULL) {  // n_k^2 would leave the exact-integer range
                cert.truncated = true;
                break;
            }
            nk = nk * nk + nk;
        }
        cert.n_seq.push_back(nk);
        const double nd = static_cast<double>(nk);
        const double off = cert.gamma / (nd * nd * nd * nd);
        cert.bound_offsets.push_back(off);
        cert.bounds.push_back(model.threshold() - off);
        const auto rep = compute_sn(nk, model, chi1);
        cert.sn_scaled_at_nk.push_back(rep.s_n_scaled);
        if (!(rep.s_n_scaled <= target))
            throw NumericalFailure("build_certificate: S_n estimate fails at n_k=" +
                                   std::to_string(nk));
    }

    // supports [n_k, n_k + n_k^2] are pairwise disjoint as open intervals:
    // the next index starts exactly at the previous right endpoint.
    cert.supports_disjoint = true;
    for (std::size_t k = 0; k + 1 < cert.n_seq.size(); ++k) {
        const std::uint64_t right = cert.n_seq[k] + cert.n_seq[k] * cert.n_seq[k];
        if (cert.n_seq[k + 1] < right) cert.supports_disjoint = false;
    }
    return cert;
}

}  // namespace conedelta::trial
