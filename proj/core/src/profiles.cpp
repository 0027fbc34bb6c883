#include "conedelta/profiles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "conedelta/errors.hpp"
#include "conedelta/quadrature.hpp"

namespace conedelta::profiles {

namespace {

// --- standardized mollifier kernel on y in (-1,1): g(y) = exp(-1/(1-y^2)) ---

double moll(double y) {
    const double w = 1.0 - y * y;
    return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
}

double moll_d1(double y) {
    const double w = 1.0 - y * y;
    if (w <= 0.0) return 0.0;
    return moll(y) * (-2.0 * y / (w * w));
}

double moll_d2(double y) {
    const double w = 1.0 - y * y;
    if (w <= 0.0) return 0.0;
    const double w2 = w * w;
    return moll(y) * (4.0 * y * y / (w2 * w2) - 2.0 * (1.0 + 3.0 * y * y) / (w * w2));
}

// --- smoothstep kernel T(x) = f(x)/(f(x)+f(1-x)), f(x) = exp(-1/x) ---

double se(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double se_d1(double x) { return x > 0.0 ? se(x) / (x * x) : 0.0; }
double se_d2(double x) { return x > 0.0 ? se(x) * (1.0 - 2.0 * x) / (x * x * x * x) : 0.0; }

double step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double fx = se(x), gx = se(1.0 - x);
    return fx / (fx + gx);
}

double step_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double fx = se(x), gx = se(1.0 - x);
    const double dfx = se_d1(x), dgx = -se_d1(1.0 - x);
    const double den = fx + gx;
    return (dfx * gx - fx * dgx) / (den * den);
}

double step_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double fx = se(x), gx = se(1.0 - x);
    const double dfx = se_d1(x), dgx = -se_d1(1.0 - x);
    const double d2fx = se_d2(x), d2gx = se_d2(1.0 - x);
    const double den = fx + gx;
    const double num1 = (d2fx * gx - fx * d2gx) * den;
    const double num2 = 2.0 * (dfx * gx - fx * dgx) * (dfx + dgx);
    return (num1 - num2) / (den * den * den);
}

}  // namespace

double SmoothProfile::eval(double x) const {
    switch (tag_) {
        case ProfileClass::smooth_bump: {
            if (x <= a_ || x >= b_) return 0.0;
            const double y = (2.0 * x - a_ - b_) / (b_ - a_);
            return scale_ * moll(y);
        }
        case ProfileClass::plateau_cutoff: {
            const double eps = param_;
            return step((eps - std::fabs(x)) / (0.5 * eps));
        }
        case ProfileClass::hardy_poly: {
            if (x <= 0.0 || x >= 1.0) return 0.0;
            return scale_ * std::pow(x, param_) * (1.0 - x);
        }
    }
    return 0.0;
}

double SmoothProfile::d1(double x) const {
    switch (tag_) {
        case ProfileClass::smooth_bump: {
            if (x <= a_ || x >= b_) return 0.0;
            const double y = (2.0 * x - a_ - b_) / (b_ - a_);
            return scale_ * moll_d1(y) * 2.0 / (b_ - a_);
        }
        case ProfileClass::plateau_cutoff: {
            const double eps = param_;
            const double u = (eps - std::fabs(x)) / (0.5 * eps);
            const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            return step_d1(u) * (-2.0 * sgn / eps);
        }
        case ProfileClass::hardy_poly: {
            if (x <= 0.0 || x >= 1.0) return 0.0;
            const double b = param_;
            return scale_ * (b * std::pow(x, b - 1.0) - (b + 1.0) * std::pow(x, b));
        }
    }
    return 0.0;
}

double SmoothProfile::d2(double x) const {
    switch (tag_) {
        case ProfileClass::smooth_bump: {
            if (x <= a_ || x >= b_) return 0.0;
            const double y = (2.0 * x - a_ - b_) / (b_ - a_);
            const double j = 2.0 / (b_ - a_);
            return scale_ * moll_d2(y) * j * j;
        }
        case ProfileClass::plateau_cutoff: {
            const double eps = param_;
            const double u = (eps - std::fabs(x)) / (0.5 * eps);
            return step_d2(u) * 4.0 / (eps * eps);
        }
        case ProfileClass::hardy_poly: {
            if (x <= 0.0 || x >= 1.0) return 0.0;
            const double b = param_;
            double v = -(b + 1.0) * b * std::pow(x, b - 1.0);
            if (b != 1.0) v += b * (b - 1.0) * std::pow(x, b - 2.0);
            return scale_ * v;
        }
    }
    return 0.0;
}

double SmoothProfile::hardy_int() const {
    if (tag_ == ProfileClass::hardy_poly) return hardy_int_;
    auto self = *this;
    auto r = quad::integrate_segments(
        [&self](double t) {
            const double v = self.eval(t);
            return v * v / (t * t);
        },
        {std::max(a_, 1e-300), 0.5 * (a_ + b_), b_});
    return r.value;
}

std::string SmoothProfile::describe() const {
    std::ostringstream os;
    switch (tag_) {
        case ProfileClass::smooth_bump:
            os << "smooth_bump(" << a_ << "," << b_ << ")";
            break;
        case ProfileClass::plateau_cutoff:
            os << "plateau_cutoff(eps=" << param_ << ")";
            break;
        case ProfileClass::hardy_poly:
            os << "hardy_poly(b=" << param_ << ")";
            break;
    }
    return os.str();
}

SmoothProfile make_bump(double a, double b) {
    if (!(a < b)) throw InvalidInputError("make_bump: requires a < b");
    SmoothProfile p;
    p.tag_ = ProfileClass::smooth_bump;
    p.a_ = a;
    p.b_ = b;
    p.scale_ = 1.0;
    auto raw = quad::integrate(
        [&p](double x) {
            const double v = p.eval(x);
            return v * v;
        },
        a, b);
    if (!raw.converged || raw.value <= 0.0)
        throw NumericalFailure("make_bump: normalization quadrature did not converge");
    p.scale_ = 1.0 / std::sqrt(raw.value);
    auto l2 = quad::integrate(
        [&p](double x) {
            const double v = p.eval(x);
            return v * v;
        },
        a, b);
    auto g = quad::integrate(
        [&p](double x) {
            const double v = p.d1(x);
            return v * v;
        },
        a, b);
    if (!l2.converged || !g.converged)
        throw NumericalFailure("make_bump: profile moment quadrature did not converge");
    p.l2_norm_sq_ = l2.value;
    p.grad_sq_ = g.value;
    return p;
}

SmoothProfile make_plateau(double eps) {
    if (!(eps > 0.0)) throw InvalidInputError("make_plateau: requires eps > 0");
    SmoothProfile p;
    p.tag_ = ProfileClass::plateau_cutoff;
    p.a_ = -eps;
    p.b_ = eps;
    p.param_ = eps;
    auto l2 = quad::integrate_segments(
        [&p](double x) {
            const double v = p.eval(x);
            return v * v;
        },
        {-eps, -0.5 * eps, 0.5 * eps, eps});
    auto g = quad::integrate_segments(
        [&p](double x) {
            const double v = p.d1(x);
            return v * v;
        },
        {-eps, -0.5 * eps, 0.5 * eps, eps});
    p.l2_norm_sq_ = l2.value;
    p.grad_sq_ = g.value;
    return p;
}

SmoothProfile make_hardy_poly(double b_exp) {
    if (!(b_exp > 0.5))
        throw InvalidInputError("make_hardy_poly: requires b_exp > 1/2 (Hardy integral finite)");
    SmoothProfile p;
    p.tag_ = ProfileClass::hardy_poly;
    p.a_ = 0.0;
    p.b_ = 1.0;
    p.param_ = b_exp;
    const double m = 2.0 * b_exp;
    // int u^m (1-u)^2 du = 2 / ((m+1)(m+2)(m+3))
    const double c2 = (m + 1.0) * (m + 2.0) * (m + 3.0) / 2.0;
    p.scale_ = std::sqrt(c2);
    p.l2_norm_sq_ = 1.0;
    p.grad_sq_ =
        c2 * (b_exp * b_exp / (m - 1.0) - (b_exp + 1.0) + (b_exp + 1.0) * (b_exp + 1.0) / (m + 1.0));
    p.hardy_int_ = c2 * 2.0 / ((m - 1.0) * m * (m + 1.0));
    return p;
}

HardyReport hardy_check(const SmoothProfile& profile, double theta) {
    if (!(theta > 0.0 && theta < 0.5 * std::numbers::pi))
        throw InvalidInputError("hardy_check: theta must lie in (0, pi/2)");
    if (profile.support_lo() < -1e-12 || profile.support_hi() > 1.0 + 1e-12)
        throw InvalidInputError("hardy_check: profile support must lie within [0,1]");
    if (std::fabs(profile.eval(0.0)) > 0.0)
        throw InvalidInputError("hardy_check: profile must vanish at 0");

    HardyReport rep;
    const double s = std::sin(theta);
    rep.bound = 1.0 / (4.0 * s * s);
    if (profile.class_tag() == ProfileClass::hardy_poly) {
        rep.grad_sq = profile.grad_sq();
        rep.hardy_int = profile.hardy_int();
    } else {
        rep.grad_sq = profile.grad_sq();
        auto h = quad::integrate_segments(
            [&profile](double t) {
                const double v = profile.eval(t);
                return v * v / (t * t);
            },
            {std::max(profile.support_lo(), 1e-300),
             0.5 * (profile.support_lo() + profile.support_hi()), profile.support_hi()});
        rep.hardy_int = h.value;
        if (!h.converged || !std::isfinite(h.value) || h.value > 1e12) {
            rep.hardy_finite = false;
            rep.satisfied = false;
            rep.margin = -std::numeric_limits<double>::infinity();
            return rep;
        }
    }
    rep.margin = rep.bound * rep.hardy_int - rep.grad_sq;
    // strictness certified only beyond a rounding guard: at boundary angles
    // (e.g. 4 sin^2 theta = 1) the two sides agree to a few ulps and the
    // strict inequality cannot be claimed
    rep.satisfied = rep.grad_sq < rep.bound * rep.hardy_int * (1.0 - 1e-12);
    return rep;
}

double select_hardy_exponent(double theta, double margin) {
    if (!(theta > 0.0 && theta < 0.5 * std::numbers::pi))
        throw InvalidInputError("select_hardy_exponent: theta must lie in (0, pi/2)");
    if (!(margin > 0.0 && margin < 1.0))
        throw InvalidInputError("select_hardy_exponent: margin must lie in (0,1)");
    const double s = std::sin(theta);
    const double bound = 1.0 / (4.0 * s * s);
    auto gap_ok = [&](double b) {
        const SmoothProfile p = make_hardy_poly(b);
        return p.grad_sq() - 0.25 * p.hardy_int() <=
               (1.0 - margin) * p.hardy_int() * (bound - 0.25);
    };
    if (gap_ok(1.0)) return 1.0;
    double lo = 0.5 + 1e-12, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gap_ok(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace conedelta::profiles
