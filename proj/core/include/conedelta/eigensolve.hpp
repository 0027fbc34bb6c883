#pragma once

#include <optional>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "conedelta/discretize.hpp"

namespace conedelta::eig {

/// factor/solve/inertia service over a sparse symmetric matrix (LDL^T without
/// pivoting; adequate for the shifted pencils this project produces, with the
/// pivot diagnostics exposed so callers can perturb the shift on breakdown).
class LdltService {
public:
    explicit LdltService(const Eigen::SparseMatrix<double>& K);

    bool ok() const { return ok_; }
    bool near_singular() const { return near_singular_; }
    /// Number of negative pivots = number of eigenvalues of K below 0.
    int negative_pivots() const { return negatives_; }
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return solver_.solve(b); }

private:
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
    bool ok_ = false;
    bool near_singular_ = false;
    int negatives_ = 0;
};

struct EigReport {
    std::vector<double> eigenvalues;  // ascending
    std::vector<double> residuals;    // ||A x - lambda M x|| / ||x||_M
    Eigen::MatrixXd vectors;          // M-normalized columns, same order
    double shift = 0.0;
    int iterations = 0;               // Lanczos steps taken
    int count_below_threshold = 0;    // inertia count at -alpha^2/4
    bool all_converged = false;
};

/// Lowest-k eigenpairs of (A, M) by shift-invert Lanczos with full
/// reorthogonalization in the M inner product. The default shift starts below
/// the spectrum (verified by inertia, doubling on failure).
EigReport lowest_eigs(const fem::Pencil& pencil, int k,
                      std::optional<double> shift = std::nullopt, double tol = 1e-8,
                      int max_iter = 500);

/// Number of eigenvalues of (A, M) below `energy` (Sylvester inertia of
/// A - energy*M). Perturbs the energy and retries when the factorization
/// signals near-singularity.
int count_below(const fem::Pencil& pencil, double energy);

/// ||A x - lambda M x||_2 / ||x||_M for an arbitrary candidate pair.
double residual_check(const fem::Pencil& pencil, double lambda, const Eigen::VectorXd& x);

}  // namespace conedelta::eig
