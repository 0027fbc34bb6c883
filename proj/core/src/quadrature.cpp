#include "conedelta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace conedelta::quad {

namespace {

// Gauss7/Kronrod15 abscissae and weights on [-1,1] (positive half).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace

double gk15_panel(const Fn1& f, double a, double b, double& err, std::size_t& evals) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = hw * kXgk[i];
        const double fs = f(c - dx) + f(c + dx);
        k15 += kWgk[i] * fs;
        if (i % 2 == 1) g7 += kWg[i / 2] * fs;
    }
    k15 *= hw;
    g7 *= hw;
    evals += 15;
    const double diff = std::fabs(k15 - g7);
    // standard QUADPACK-style sharpened estimate
    err = diff * std::min(1.0, std::pow(200.0 * diff / std::max(1e-300, std::fabs(hw)), 0.5));
    err = std::max(err, diff * 1e-6);
    if (!std::isfinite(err)) err = diff;
    return k15;
}

Result integrate(const Fn1& f, double a, double b, const Options& opt) {
    Result res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Interval> heap;
    double err0 = 0.0;
    double v0 = gk15_panel(f, a, b, err0, res.evals);
    heap.push({a, b, v0, err0});
    double total_v = v0, total_e = err0;
    while (total_e > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total_v))) {
        if (heap.size() >= opt.max_intervals) break;
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // cannot split further
            heap.push(worst);
            break;
        }
        double e1 = 0, e2 = 0;
        const double v1 = gk15_panel(f, worst.a, mid, e1, res.evals);
        const double v2 = gk15_panel(f, mid, worst.b, e2, res.evals);
        total_v += v1 + v2 - worst.value;
        total_e += e1 + e2 - worst.error;
        heap.push({worst.a, mid, v1, e1});
        heap.push({mid, worst.b, v2, e2});
    }
    res.value = total_v;
    res.error = total_e;
    res.converged = total_e <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total_v));
    return res;
}

Result integrate_segments(const Fn1& f, const std::vector<double>& breakpoints,
                          const Options& opt) {
    Result total;
    total.converged = true;
    if (breakpoints.size() < 2) return total;
    Options per = opt;
    per.abs_tol = opt.abs_tol / static_cast<double>(breakpoints.size() - 1);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        Result r = integrate(f, breakpoints[i], breakpoints[i + 1], per);
        total.value += r.value;
        total.error += r.error;
        total.evals += r.evals;
        total.converged = total.converged && r.converged;
    }
    return total;
}

Result integrate2d(const std::function<double(double, double)>& f,
                   double ax, double bx,
                   const std::vector<double>& ybreaks,
                   const Options& opt) {
    Options inner = opt;
    inner.abs_tol = 0.1 * opt.abs_tol / std::max(1.0, std::fabs(bx - ax));
    inner.rel_tol = 0.1 * opt.rel_tol;

    double inner_err_max = 0.0;
    std::size_t inner_evals = 0;
    bool inner_ok = true;
    auto outer_fn = [&](double x) {
        Result r = integrate_segments([&](double y) { return f(x, y); }, ybreaks, inner);
        inner_err_max = std::max(inner_err_max, r.error);
        inner_evals += r.evals;
        inner_ok = inner_ok && r.converged;
        return r.value;
    };
    Result out = integrate(outer_fn, ax, bx, opt);
    out.error += inner_err_max * std::fabs(bx - ax);
    out.evals += inner_evals;
    out.converged = out.converged && inner_ok;
    return out;
}

}  // namespace conedelta::quad
