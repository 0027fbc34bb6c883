#include "conedelta/eigensolve.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "conedelta/errors.hpp"

namespace conedelta::eig {

namespace {

Eigen::SparseMatrix<double> shifted(const fem::Pencil& p, double sigma) {
    Eigen::SparseMatrix<double> K = p.A;
    // M is diagonal; subtract sigma*M on the diagonal
    for (int i = 0; i < K.rows(); ++i) K.coeffRef(i, i) -= sigma * p.M[i];
    return K;
}

}  // namespace

LdltService::LdltService(const Eigen::SparseMatrix<double>& K) {
    solver_.compute(K);
    if (solver_.info() != Eigen::Success) {
        ok_ = false;
        near_singular_ = true;
        return;
    }
    const Eigen::VectorXd d = solver_.vectorD();
    double dmax = 0.0;
    for (int i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i])) {
            ok_ = false;
            near_singular_ = true;
            return;
        }
        dmax = std::max(dmax, std::fabs(d[i]));
    }
    negatives_ = 0;
    double dmin = dmax;
    for (int i = 0; i < d.size(); ++i) {
        if (d[i] < 0.0) ++negatives_;
        dmin = std::min(dmin, std::fabs(d[i]));
    }
    near_singular_ = dmin <= 1e-14 * dmax;
    ok_ = true;
}

double residual_check(const fem::Pencil& pencil, double lambda, const Eigen::VectorXd& x) {
    const Eigen::VectorXd rres = pencil.A * x - lambda * pencil.M.cwiseProduct(x);
    const double xm = std::sqrt(x.dot(pencil.M.cwiseProduct(x)));
    return rres.norm() / xm;
}

int count_below(const fem::Pencil& pencil, double energy) {
    const double scale = std::max(1.0, std::fabs(energy));
    const double steps[] = {0.0, 1e-10, -1e-10, 1e-9, -1e-9, 1e-8, -1e-8};
    for (double s : steps) {
        LdltService f(shifted(pencil, energy + s * scale));
        if (f.ok() && !f.near_singular()) return f.negative_pivots();
    }
    throw NumericalFailure("count_below: factorization near-singular after perturbation retries");
}

EigReport lowest_eigs(const fem::Pencil& pencil, int k, std::optional<double> shift, double tol,
                      int max_iter) {
    const int n = static_cast<int>(pencil.A.rows());
    if (k < 1) throw InvalidInputError("lowest_eigs: k >= 1 required");
    k = std::min(k, n);

    const double a2 = pencil.alpha * pencil.alpha;
    const double s2 = std::sin(pencil.theta) * std::sin(pencil.theta);
    double sigma = shift.value_or(std::min(-a2, -1.25 * a2 / (4.0 * s2)));

    // keep the shift strictly below the spectrum so the shifted matrix is
    // positive definite and all transformed eigenvalues are positive
    std::optional<LdltService> fact;
    for (int attempt = 0; attempt < 10; ++attempt) {
        fact.emplace(shifted(pencil, sigma));
        if (fact->ok() && !fact->near_singular() && fact->negative_pivots() == 0) break;
        if (fact->ok() && fact->near_singular()) {
            sigma *= 1.0 + 1e-4;  // breakdown: shift hit an eigenvalue
            continue;
        }
        sigma *= 2.0;
        fact.reset();
    }
    if (!fact || !fact->ok() || fact->negative_pivots() > 0)
        throw NumericalFailure("lowest_eigs: could not factorize below the spectrum");

    const Eigen::VectorXd& M = pencil.M;
    auto mdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return a.dot(M.cwiseProduct(b));
    };

    // Lanczos on Op = (A - sigma M)^{-1} M in the M inner product,
    // full (twice) reorthogonalization against the whole basis.
    std::vector<Eigen::VectorXd> Q;
    std::vector<double> alpha_c, beta_c;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    v /= std::sqrt(mdot(v, v));
    Q.push_back(v);

    EigReport rep;
    rep.shift = sigma;

    const int mmax = std::min(n, max_iter);
    int m = std::min(n, std::max(3 * k + 20, 40));
    int j = 0;
    Eigen::VectorXd w;
    bool done = false;
    bool breakdown = false;
    while (!done) {
        for (; j < m && j < mmax; ++j) {
            w = fact->solve(M.cwiseProduct(Q[static_cast<std::size_t>(j)]));
            const double aj = mdot(w, Q[static_cast<std::size_t>(j)]);
            alpha_c.push_back(aj);
            w -= aj * Q[static_cast<std::size_t>(j)];
            if (j > 0) w -= beta_c[static_cast<std::size_t>(j - 1)] * Q[static_cast<std::size_t>(j - 1)];
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : Q) w -= mdot(w, q) * q;
            const double bj = std::sqrt(std::max(0.0, mdot(w, w)));
            if (bj < 1e-13) {  // invariant subspace reached
                breakdown = true;
                ++j;
                break;
            }
            beta_c.push_back(bj);
            Q.push_back(w / bj);
        }
        const int mm = static_cast<int>(alpha_c.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mm, mm);
        for (int i = 0; i < mm; ++i) {
            T(i, i) = alpha_c[static_cast<std::size_t>(i)];
            if (i + 1 < mm) {
                T(i, i + 1) = beta_c[static_cast<std::size_t>(i)];
                T(i + 1, i) = beta_c[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        // largest nu <-> eigenvalues nearest above sigma
        const int kk = std::min(k, mm);
        rep.eigenvalues.assign(static_cast<std::size_t>(kk), 0.0);
        rep.residuals.assign(static_cast<std::size_t>(kk), 1.0);
        rep.vectors.resize(n, kk);
        bool all_ok = true;
        for (int i = 0; i < kk; ++i) {
            const int idx = mm - 1 - i;  // descending nu
            const double nu = es.eigenvalues()[idx];
            const double lam = sigma + 1.0 / nu;
            Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
            for (int l = 0; l < mm; ++l) x += es.eigenvectors()(l, idx) * Q[static_cast<std::size_t>(l)];
            x /= std::sqrt(mdot(x, x));
            const double res = residual_check(pencil, lam, x);
            rep.eigenvalues[static_cast<std::size_t>(i)] = lam;
            rep.residuals[static_cast<std::size_t>(i)] = res;
            rep.vectors.col(i) = x;
            if (res > tol) all_ok = false;
        }
        rep.iterations = mm;
        rep.all_converged = all_ok && kk == k;
        if (rep.all_converged || mm >= mmax || mm >= n || breakdown) {
            done = true;  // converged, hit the cap, or invariant subspace
        } else {
            m = std::min(mmax, std::max(m + 20, (3 * m) / 2));
        }
    }

    // ascending eigenvalue order (nu descending already gives ascending lambda
    // for sigma below the spectrum, but enforce it for safety)
    std::vector<int> order(rep.eigenvalues.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rep.eigenvalues[static_cast<std::size_t>(a)] < rep.eigenvalues[static_cast<std::size_t>(b)]; });
    EigReport sorted = rep;
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.eigenvalues[i] = rep.eigenvalues[static_cast<std::size_t>(order[i])];
        sorted.residuals[i] = rep.residuals[static_cast<std::size_t>(order[i])];
        sorted.vectors.col(static_cast<int>(i)) = rep.vectors.col(order[i]);
    }
    sorted.count_below_threshold = count_below(pencil, pencil.threshold());
    return sorted;
}

}  // namespace conedelta::eig
