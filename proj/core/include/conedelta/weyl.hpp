#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "conedelta/geometry.hpp"
#include "conedelta/profiles.hpp"

namespace conedelta::weyl {

/// Member of the singular-sequence family
///   w_np(s,t) = (1/sqrt(n)) chi1(s/n) e^{ips} chi2(t/n) e^{-a|t|/2},
/// chi1 a normalized bump on (1,2), chi2 a plateau cutoff with eps < tan(theta).
/// The complex phase is carried as two real components; every norm below is the
/// sum over the two components.
struct WeylFunction {
    std::uint64_t n;
    double p;
    ConeModel model;
    double eps;
    profiles::SmoothProfile chi1;
    profiles::SmoothProfile chi2;

    static WeylFunction make(std::uint64_t n, double p, const ConeModel& model);
    static WeylFunction make(std::uint64_t n, double p, const ConeModel& model, double eps);

    /// Distance from the axis to the support: n (sin(theta) - eps cos(theta)).
    double rho() const;
    std::pair<double, double> s_support() const;
    std::pair<double, double> t_support() const;
};

struct DefectReport {
    std::uint64_t n = 0;
    double p = 0.0;
    double norm_sq = 0.0;
    double grad_sq = 0.0;
    double defect = 0.0;         // ||(H - E) psi|| / ||psi||
    double target_energy = 0.0;  // p^2 - alpha^2/4
    double detune = 0.0;         // energy offset added to the target (0: on-shell)
    double quad_error = 0.0;
};

/// Factorized 1D quadratures of ||w_np||^2 and ||grad w_np||^2.
std::pair<double, double> weyl_norms(std::uint64_t n, double p, const ConeModel& model);

/// Relative defect at energy p^2 - alpha^2/4 + detune, by 2D quadrature of the
/// piecewise classical residual (the delta line contributes exactly zero by the
/// jump identity, which jump_residual verifies).
DefectReport weyl_defect(std::uint64_t n, double p, const ConeModel& model,
                         double detune = 0.0);

/// max_s |dt w(s,0+) - dt w(s,0-) + alpha w(s,0)| over an s sample; identically
/// zero for every family member (plateau => chi2(0)=1, chi2'(0)=0).
double jump_residual(const WeylFunction& w, int samples = 64);

struct SweepResult {
    std::vector<DefectReport> reports;
    double fitted_decay_exponent = 0.0;  // q in defect ~ C n^{-q}
};

/// Batch of weyl_defect over ascending n (dyadic in the classical use).
SweepResult weyl_sweep(double p, const std::vector<std::uint64_t>& n_list,
                       const ConeModel& model, double detune = 0.0);

}  // namespace conedelta::weyl
