#pragma once

#include <cstdint>
#include <vector>

#include "conedelta/geometry.hpp"

namespace conedelta::bracket {

/// Lowest eigenvalue mu = -kappa^2 of -d^2/dt^2 on (-L/2, L/2) with Neumann
/// ends and an attractive delta of strength beta at 0; kappa is the positive
/// root of the even-mode matching equation 2 kappa tanh(kappa L/2) = beta.
struct MuResult {
    double beta = 0.0;
    double length_L = 0.0;
    double kappa = 0.0;
    double mu = 0.0;
    int iterations = 0;
    double residual = 0.0;  // |2 kappa tanh(kappa L/2) - beta|
};

MuResult mu_neumann_delta(double beta, double L);

/// Exponential-law check for the gap -(mu + beta^2/4) against the model
/// gap <= C beta^2 exp(-beta L/4). c_fit follows the two largest lengths;
/// `verified` holds when the per-sample implied constants are non-increasing,
/// i.e. the measured decay is at least the modeled rate so the law holds on
/// the whole sample with C = max implied constant.
struct GapLawFit {
    double c_fit = 0.0;
    bool verified = false;
    std::vector<double> lengths;
    std::vector<double> gaps;
    std::vector<double> implied_c;
};

GapLawFit gap_law_fit(double beta, const std::vector<double>& L_list);

/// Composite essential-spectrum lower estimate at bracketing parameter n:
///   c_n = r(n,0)/r(n,-sqrt(n)),  bound = mu(alpha c_n, 2 sqrt(n)) * c_n.
/// bound <= -alpha^2/4 for every admissible n and increases toward it.
struct ThresholdBound {
    std::uint64_t n = 0;
    double c_n = 0.0;
    double beta_eff = 0.0;     // alpha * c_n
    double mu_val = 0.0;
    double correction = 0.0;   // the realized (1 + O(1/sqrt(n))) factor, = c_n
    double bound = 0.0;
};

ThresholdBound threshold_lower_bound(std::uint64_t n, const ConeModel& model);

/// True when every eigenvalue in `eigenvalues` stays above `bound.bound - tol`.
bool bracketing_consistency(const std::vector<double>& eigenvalues,
                            const ThresholdBound& bound, double tol = 1e-9);

}  // namespace conedelta::bracket
