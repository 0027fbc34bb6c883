#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "conedelta/geometry.hpp"
#include "conedelta/profiles.hpp"

namespace conedelta::trial {

/// Real scalar field in the ray coordinates (s,t) with analytic first
/// derivatives and a rectangular support bounding box. The box may be larger
/// than the support; min_support_r, when finite, is the true infimum of the
/// radius r over the support (otherwise it is taken from the box corners).
struct ScalarField {
    std::function<double(double, double)> value;
    std::function<double(double, double)> ds;
    std::function<double(double, double)> dt;
    double s_lo = 0.0, s_hi = 0.0, t_lo = 0.0, t_hi = 0.0;
    double min_support_r = std::numeric_limits<double>::quiet_NaN();
};

enum class Family { essential, discrete };

/// Member of one of the two explicit trial families.
///
/// discrete:   w_n(s,t) = (1/n)   chi1((s-n)/n^2) chi2(t/sqrt(n)) exp(-a|t|/2)
/// essential:  w_np(s,t) = (1/sqrt(n)) chi1(s/n) e^{ips} chi2(t/n) exp(-a|t|/2)
struct TrialFunction {
    Family family;
    std::uint64_t n;
    double p = 0.0;  // essential-family wavenumber
    profiles::SmoothProfile chi1;
    profiles::SmoothProfile chi2;
    double alpha;
    double theta;
    double eps;  // chi2 half-width parameter

    static TrialFunction discrete(std::uint64_t n, const ConeModel& model,
                                  const profiles::SmoothProfile& chi1, double eps);
    static TrialFunction discrete(std::uint64_t n, const ConeModel& model,
                                  const profiles::SmoothProfile& chi1);
    static TrialFunction essential(std::uint64_t n, double p, const ConeModel& model,
                                   double eps);
    static TrialFunction essential(std::uint64_t n, double p, const ConeModel& model);

    std::pair<double, double> s_support() const;
    std::pair<double, double> t_support() const;

    /// The function as a real scalar field; essential members require p == 0
    /// (complex members are handled componentwise by the weyl module).
    ScalarField field() const;
};

/// Transition half-width for the discrete family at index n: wide enough that
/// the chi2 edge terms are negligible after the n^4 scaling, capped so the
/// support keeps a 15% margin inside the half-plane.
double default_discrete_eps(std::uint64_t n, const ConeModel& model);

/// Per-index breakdown of S_n = a[psi_n] + (alpha^2/4)||psi_n||^2.
struct SnReport {
    std::uint64_t n = 0;
    double eps = 0.0;
    double grad_term = 0.0;   // ||grad w_n||^2
    double i_n = 0.0;         // singular term, on-ray radius
    double j_n = 0.0;         // singular term, radius-variation remainder
    double sing_term = 0.0;   // i_n + j_n
    double trace_term = 0.0;  // alpha ||w_n|_Gamma||^2
    double norm_term = 0.0;   // (alpha^2/4) ||w_n||^2
    double s_n = 0.0;         // grad - sing - trace + norm (exact bookkeeping)
    double s_n_scaled = 0.0;  // s_n * n^4, evaluated by the cancellation-free route
    double err_scaled = 0.0;  // quadrature error bound on s_n_scaled
    bool j_by_bound = false;  // j_n replaced by its analytic bound (large n)
};

/// Reduced quadratic form ||grad w||^2 - int w^2/(4r^2) - alpha ||w|_Gamma||^2
/// by 2D adaptive quadrature in (s,t). Support must stay inside r > 0.
double reduced_form_value(const ScalarField& w, const ConeModel& model);

/// L2 norm square of a field by 2D quadrature.
double field_norm_sq(const ScalarField& w);

/// reduced_form_value / ||w||^2; an upper bound for the lowest eigenvalue.
double rayleigh_quotient(const ScalarField& w, const ConeModel& model);

/// Term-by-term evaluation of S_n for the discrete family (factorized 1D
/// quadratures; 2D only for the radius-variation remainder j_n, replaced by
/// its analytic bound once n is large enough that the bound meets the
/// certificate's error gate).
SnReport compute_sn(std::uint64_t n, const ConeModel& model,
                    const profiles::SmoothProfile& chi1, const profiles::SmoothProfile& chi2);
SnReport compute_sn(std::uint64_t n, const ConeModel& model,
                    const profiles::SmoothProfile& chi1);

/// Closed-form limit of S_n * n^4:
///   L = (2/alpha) (||chi1'||^2 - int_0^1 chi1^2/(4 sin^2 theta u^2) du) < 0.
double sn_limit(const ConeModel& model, const profiles::SmoothProfile& chi1);

/// Variational eigenvalue certificate: gamma, N, the index recursion
/// n_{k+1} = n_k^2 + n_k and the certified upper bounds
///   lambda_k <= -alpha^2/4 - gamma/n_k^4.
struct Certificate {
    double alpha = 0.0;
    double theta = 0.0;
    std::string chi1_desc;
    double limit_L = 0.0;
    double safety = 0.5;
    double gamma = 0.0;
    std::uint64_t n_start = 0;
    std::vector<std::uint64_t> n_seq;
    std::vector<double> bound_offsets;   // gamma / n_k^4, strictly positive
    std::vector<double> bounds;          // -alpha^2/4 - offset (display values)
    std::vector<double> sn_scaled_at_nk; // verified S_{n_k} n_k^4 values
    bool supports_disjoint = false;
    bool truncated = false;  // recursion stopped before k_max (64-bit limit)
};

Certificate build_certificate(const ConeModel& model, const profiles::SmoothProfile& chi1,
                              int k_max, double safety = 0.5,
                              std::uint64_t n_cap = 1000000);

}  // namespace conedelta::trial
