#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

namespace conedelta::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;      // estimated absolute error
    std::size_t evals = 0;
    bool converged = false;

    Result& operator+=(const Result& o) {
        value += o.value;
        error += o.error;
        evals += o.evals;
        converged = converged && o.converged;
        return *this;
    }
};

using Fn1 = std::function<double(double)>;

/// Single Gauss7/Kronrod15 panel; returns the K15 value, writes the error estimate.
double gk15_panel(const Fn1& f, double a, double b, double& err, std::size_t& evals);

/// Globally adaptive G7K15 on [a,b] (worst-interval-first subdivision).
Result integrate(const Fn1& f, double a, double b, const Options& opt = {});

/// Adaptive integration with interior breakpoints (kinks, scale changes).
Result integrate_segments(const Fn1& f, const std::vector<double>& breakpoints,
                          const Options& opt = {});

/// Iterated 2D integral over [ax,bx] x [ay,by]; `ybreaks` are inner breakpoints.
Result integrate2d(const std::function<double(double, double)>& f,
                   double ax, double bx,
                   const std::vector<double>& ybreaks,
                   const Options& opt = {});

}  // namespace conedelta::quad
