#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "conedelta/errors.hpp"

namespace conedelta {

/// Physical model: attractive delta interaction of strength `alpha` on the
/// cone z = cot(theta)*sqrt(x^2+y^2); `theta` is the half-angle measured from
/// the z-axis. The essential spectrum starts at threshold() = -alpha^2/4.
struct ConeModel {
    double alpha;
    double theta;

    ConeModel(double alpha_, double theta_) : alpha(alpha_), theta(theta_) {
        if (!(alpha > 0.0))
            throw InvalidInputError("ConeModel: alpha must be > 0, got " + std::to_string(alpha_));
        if (!(theta > 0.0 && theta < 0.5 * std::numbers::pi))
            throw InvalidInputError("ConeModel: theta must lie in (0, pi/2), got " +
                                    std::to_string(theta_));
    }

    double threshold() const { return -0.25 * alpha * alpha; }
};

namespace geom {

/// (s,t) -> (r,z). s runs along the ray z = r*cot(theta), t points into the
/// region below the ray; the map is the plane rotation with r(s,0) = s*sin(theta).
inline std::pair<double, double> st_to_rz(double s, double t, double theta) {
    const double sn = std::sin(theta), cs = std::cos(theta);
    return {s * sn + t * cs, s * cs - t * sn};
}

/// Exact inverse of st_to_rz.
inline std::pair<double, double> rz_to_st(double r, double z, double theta) {
    const double sn = std::sin(theta), cs = std::cos(theta);
    return {r * sn + z * cs, r * cs - z * sn};
}

/// The axisymmetric weight r(s,t) = s*sin(theta) + t*cos(theta). May be <= 0
/// outside the physical half-plane; callers must check.
inline double weight_r(double s, double t, double theta) {
    return s * std::sin(theta) + t * std::cos(theta);
}

/// Ray frame for Gamma_theta: bundles the angle with the coordinate maps.
struct RayFrame {
    double theta;

    explicit RayFrame(double theta_) : theta(theta_) {
        if (!(theta > 0.0 && theta < 0.5 * std::numbers::pi))
            throw InvalidInputError("RayFrame: theta must lie in (0, pi/2)");
    }

    std::pair<double, double> to_rz(double s, double t) const { return st_to_rz(s, t, theta); }
    std::pair<double, double> to_st(double r, double z) const { return rz_to_st(r, z, theta); }
    double r(double s, double t) const { return weight_r(s, t, theta); }
};

}  // namespace geom
}  // namespace conedelta
