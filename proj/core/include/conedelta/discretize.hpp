#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "conedelta/geometry.hpp"

namespace conedelta::fem {

/// Tensor grid on [0, r_max] x [z_min, z_max]. Dirichlet on r = r_max and
/// z = z_min, z_max; no essential condition on the axis r = 0.
struct Grid {
    double r_max = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;
    double h_r = 0.0;
    double h_z = 0.0;
    int nr = 0;  // cells in r
    int nz = 0;  // cells in z
    std::vector<int> dof;  // node -> dof index, -1 on Dirichlet nodes
    int ndof = 0;

    int node(int i, int j) const { return i * (nz + 1) + j; }
    double r_of(int i) const { return i * h_r; }
    double z_of(int j) const { return z_min + j * h_z; }
};

Grid build_grid(const ConeModel& model, double r_max, double z_extent, double h);

/// Generatrix of the axisymmetric interaction surface in the (r,z) half-plane:
/// the straight ray z = r cot(theta) or a compactly deformed polyline that
/// coincides with the ray beyond radius R0 from the origin.
struct Generatrix {
    std::vector<std::pair<double, double>> vertices;  // (r,z), used when !straight
    bool straight = true;
    double theta = 0.0;
    double R0 = 0.0;

    static Generatrix straight_ray(double theta);
    static Generatrix deformed(std::vector<std::pair<double, double>> polyline, double theta,
                               double R0);

    /// Invariants: vertices beyond R0 lie on the ray; the polyline is simple.
    void validate() const;
    std::string describe() const;
};

/// Plain-text polyline: one "r z" pair per line, '#' starts a comment.
Generatrix load_generatrix(const std::string& path, double theta, double R0);
void save_generatrix(const Generatrix& g, const std::string& path);

/// Assembled pencil for the reduced weighted form
///   a(u,u) = int r |grad u|^2 dr dz - alpha int_Gamma u^2 r dl
/// (global 2*pi dropped) with lumped mass int r u^2 dr dz.
struct Pencil {
    Eigen::SparseMatrix<double> A;  // symmetric stiffness incl. the delta line
    Eigen::VectorXd M;              // lumped mass diagonal, all entries > 0
    double alpha = 0.0;
    double theta = 0.0;
    Grid grid;
    std::string generatrix_desc;

    double threshold() const { return -0.25 * alpha * alpha; }
};

/// Bilinear 4-node elements, 2x2 Gauss (exact for the r-weighted integrands),
/// lumped mass, exact polynomial line integrals along the generatrix segments.
Pencil assemble(const Grid& grid, const ConeModel& model, const Generatrix& gen);

/// Identical pipeline with the deformed polyline; validates the Generatrix
/// invariants first.
Pencil assemble_deformed(const Grid& grid, const ConeModel& model, const Generatrix& gen);

}  // namespace conedelta::fem
