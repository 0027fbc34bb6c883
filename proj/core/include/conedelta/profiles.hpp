#pragma once

#include <string>

namespace conedelta::profiles {

enum class ProfileClass { smooth_bump, plateau_cutoff, hardy_poly };

/// One-dimensional cutoff/trial profile with closed-form derivatives.
///
/// Three concrete families:
///  - smooth_bump: normalized C^inf mollifier on (a,b),
///      chi(x) = c * exp(-(b-a)^2 / (4 (x-a)(b-x)))
///  - plateau_cutoff: C^inf cutoff on (-eps,eps), identically 1 on [-eps/2,eps/2]
///  - hardy_poly: normalized chi(u) = c * u^b (1-u) on (0,1), b > 1/2
class SmoothProfile {
public:
    double eval(double x) const;
    double d1(double x) const;
    double d2(double x) const;

    ProfileClass class_tag() const { return tag_; }
    double support_lo() const { return a_; }
    double support_hi() const { return b_; }
    /// Integral of chi^2 over the support (1 for the normalized families).
    double l2_norm_sq() const { return l2_norm_sq_; }
    /// Integral of chi'^2 over the support.
    double grad_sq() const { return grad_sq_; }
    /// Integral of chi^2/x^2 (finite closed form for hardy_poly; quadrature otherwise).
    double hardy_int() const;
    /// True for families constructed with unit L2 norm.
    bool normalized() const { return tag_ != ProfileClass::plateau_cutoff; }
    /// Exponent b for hardy_poly, eps for plateau_cutoff.
    double parameter() const { return param_; }
    std::string describe() const;

    friend SmoothProfile make_bump(double a, double b);
    friend SmoothProfile make_plateau(double eps);
    friend SmoothProfile make_hardy_poly(double b_exp);

private:
    SmoothProfile() = default;

    ProfileClass tag_ = ProfileClass::smooth_bump;
    double a_ = 0.0, b_ = 1.0;    // support [a,b]
    double scale_ = 1.0;          // normalization constant c
    double param_ = 0.0;          // b_exp (hardy_poly) or eps (plateau)
    double l2_norm_sq_ = 1.0;
    double grad_sq_ = 0.0;
    double hardy_int_ = 0.0;      // hardy_poly only; others computed on demand
};

/// Normalized C^inf mollifier on (a,b); ||chi||_{L2(a,b)} = 1.
SmoothProfile make_bump(double a, double b);

/// C^inf plateau cutoff: 1 on [-eps/2, eps/2], 0 outside (-eps, eps), 0<=chi<=1.
SmoothProfile make_plateau(double eps);

/// Normalized chi(u) = c u^b (1-u) on (0,1); requires b_exp > 1/2 so that
/// the Hardy integral converges. All three Hardy-condition integrals close in
/// elementary form.
SmoothProfile make_hardy_poly(double b_exp);

/// Verdict for the strict angular Hardy condition
///   ||chi'||^2 < (1/(4 sin^2 theta)) * int_0^1 chi(t)^2/t^2 dt.
struct HardyReport {
    double grad_sq = 0.0;
    double hardy_int = 0.0;
    double bound = 0.0;          // 1/(4 sin^2 theta)
    bool satisfied = false;
    double margin = 0.0;         // bound*hardy_int - grad_sq
    bool hardy_finite = true;
};

/// Evaluates both sides of the Hardy condition for a profile supported in [0,1]
/// that vanishes at 0 (closed forms for hardy_poly, quadrature otherwise).
HardyReport hardy_check(const SmoothProfile& profile, double theta);

/// Largest exponent b in (1/2, 1] whose profile passes the Hardy condition with
/// the requested relative margin on the gap above the sharp Hardy constant:
///   grad_sq - hardy_int/4 <= (1-margin) * hardy_int * (bound - 1/4).
/// A valid b always exists: the gap ratio tends to 0 as b -> 1/2+.
double select_hardy_exponent(double theta, double margin = 0.1);

}  // namespace conedelta::profiles
