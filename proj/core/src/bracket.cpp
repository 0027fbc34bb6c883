#include "conedelta/bracket.hpp"

#include <algorithm>
#include <cmath>

#include "conedelta/errors.hpp"

namespace conedelta::bracket {

MuResult mu_neumann_delta(double beta, double L) {
    if (!(beta > 0.0)) throw InvalidInputError("mu_neumann_delta: beta > 0 required");
    if (!(L > 0.0)) throw InvalidInputError("mu_neumann_delta: L > 0 required");

    auto g = [&](double k) { return 2.0 * k * std::tanh(0.5 * k * L) - beta; };
    auto dg = [&](double k) {
        const double x = 0.5 * k * L;
        const double t = std::tanh(x);
        return 2.0 * t + k * L * (1.0 - t * t);
    };

    MuResult res;
    res.beta = beta;
    res.length_L = L;

    // tanh < 1 forces kappa > beta/2; grow the upper end until bracketed
    // (beta/2 + beta is not enough when beta*L is small).
    double lo = 0.5 * beta;
    double hi = 1.5 * beta;
    int it = 0;
    while (g(hi) < 0.0 && it < 200) {
        hi *= 2.0;
        ++it;
    }
    if (g(hi) < 0.0) throw NumericalFailure("mu_neumann_delta: failed to bracket the root");
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        ++it;
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * hi) break;
    }
    double k = 0.5 * (lo + hi);
    for (int i = 0; i < 30; ++i) {
        const double f = g(k);
        ++it;
        if (std::fabs(f) <= 1e-14 * std::max(1.0, beta)) break;
        const double step = f / dg(k);
        const double kn = k - step;
        if (!(kn > lo && kn < hi)) break;  // keep the bisection bracket
        if (kn == k) break;
        k = kn;
    }
    res.kappa = k;
    res.mu = -k * k;
    res.iterations = it;
    res.residual = std::fabs(g(k));
    return res;
}

GapLawFit gap_law_fit(double beta, const std::vector<double>& L_list) {
    if (L_list.size() < 3) throw InvalidInputError("gap_law_fit: need at least 3 lengths");
    if (!std::is_sorted(L_list.begin(), L_list.end()))
        throw InvalidInputError("gap_law_fit: lengths must be ascending");

    GapLawFit fit;
    fit.lengths = L_list;
    for (double L : L_list) {
        const MuResult m = mu_neumann_delta(beta, L);
        fit.gaps.push_back(-(m.mu + 0.25 * beta * beta));
    }
    const double gmax = *std::max_element(fit.gaps.begin(), fit.gaps.end());
    if (gmax < 1e-12 * beta * beta) {  // gaps at the root-residual floor
        fit.c_fit = 0.0;
        fit.verified = true;
        fit.implied_c.assign(L_list.size(), 0.0);
        return fit;
    }
    for (std::size_t i = 0; i < L_list.size(); ++i)
        fit.implied_c.push_back(std::max(fit.gaps[i], 0.0) *
                                std::exp(0.25 * beta * L_list[i]) / (beta * beta));
    const std::size_t m = L_list.size();
    fit.c_fit = std::exp(0.5 * (std::log(std::max(fit.implied_c[m - 2], 1e-300)) +
                                std::log(std::max(fit.implied_c[m - 1], 1e-300))));
    fit.verified = true;
    for (std::size_t i = 0; i + 1 < m; ++i)
        if (fit.implied_c[i + 1] > fit.implied_c[i] * (1.0 + 1e-9)) fit.verified = false;
    return fit;
}

ThresholdBound threshold_lower_bound(std::uint64_t n, const ConeModel& model) {
    const double nd = static_cast<double>(n);
    const double sq = std::sqrt(nd);
    const double sn = std::sin(model.theta), cs = std::cos(model.theta);
    const double denom = nd * sn - sq * cs;  // r(n, -sqrt(n))
    if (!(denom > 0.0))
        throw InvalidInputError(
            "threshold_lower_bound: n too small (needs sqrt(n) > cot(theta))");
    ThresholdBound tb;
    tb.n = n;
    tb.c_n = nd * sn / denom;  // sup over s >= n attained at s = n
    tb.beta_eff = model.alpha * tb.c_n;
    const MuResult m = mu_neumann_delta(tb.beta_eff, 2.0 * sq);
    tb.mu_val = m.mu;
    tb.correction = tb.c_n;
    tb.bound = m.mu * tb.c_n;
    return tb;
}

bool bracketing_consistency(const std::vector<double>& eigenvalues,
                            const ThresholdBound& bound, double tol) {
    for (double ev : eigenvalues)
        if (ev < bound.bound - tol) return false;
    return true;
}

}  // namespace conedelta::bracket
