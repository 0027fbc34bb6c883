#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "conedelta/discretize.hpp"
#include "conedelta/quadrature.hpp"
#include "support/oracles.hpp"

using namespace conedelta;
using namespace conedelta::fem;
using std::numbers::pi;

namespace {

const ConeModel kModel{1.0, pi / 4};

oracles::TensorBumpField make_bump_field() {
    // one smooth term well inside the 12x(+-12) box, crossing the ray
    oracles::TensorBumpField f;
    f.terms.push_back({1.0, profiles::make_bump(2.0, 7.0), profiles::make_bump(1.0, 8.0)});
    f.r_lo = 2.0;
    f.r_hi = 7.0;
    f.z_lo = 1.0;
    f.z_hi = 8.0;
    return f;
}

double continuum_form(const oracles::TensorBumpField& f, const ConeModel& m) {
    std::vector<double> zb;
    for (int i = 0; i <= 8; ++i) zb.push_back(f.z_lo + (f.z_hi - f.z_lo) * i / 8.0);
    auto grad = quad::integrate2d(
        [&](double r, double z) {
            const double gr = f.dr(r, z), gz = f.dz(r, z);
            return r * (gr * gr + gz * gz);
        },
        f.r_lo, f.r_hi, zb);
    const double sn = std::sin(m.theta), cs = std::cos(m.theta);
    std::vector<double> sb;
    for (int i = 0; i <= 8; ++i) sb.push_back((f.r_lo + (f.r_hi - f.r_lo) * i / 8.0) / sn);
    auto tr = quad::integrate_segments(
        [&](double s) {
            const double v = f.value(s * sn, s * cs);
            return v * v * s * sn;  // r-weighted trace
        },
        sb);
    return grad.value - m.alpha * tr.value;
}

double continuum_mass(const oracles::TensorBumpField& f) {
    std::vector<double> zb;
    for (int i = 0; i <= 8; ++i) zb.push_back(f.z_lo + (f.z_hi - f.z_lo) * i / 8.0);
    return quad::integrate2d(
               [&](double r, double z) {
                   const double v = f.value(r, z);
                   return r * v * v;
               },
               f.r_lo, f.r_hi, zb)
        .value;
}

}  // namespace

TEST_CASE("grid construction and node counts") {
    const Grid g = build_grid(kModel, 60.0, 60.0, 0.5);
    CHECK(g.nr == 120);
    CHECK(g.nz == 240);
    CHECK((g.nr + 1) * (g.nz + 1) == 121 * 241);  // nodes before elimination
    CHECK(g.ndof == 120 * 239);
    // apex is a node and a dof
    CHECK(g.dof[static_cast<std::size_t>(g.node(0, g.nz / 2))] >= 0);
    CHECK(g.r_of(0) == 0.0);
    CHECK(g.z_of(g.nz / 2) == 0.0);
    // Dirichlet nodes eliminated
    CHECK(g.dof[static_cast<std::size_t>(g.node(g.nr, 1))] == -1);
    CHECK(g.dof[static_cast<std::size_t>(g.node(0, 0))] == -1);
    CHECK(g.dof[static_cast<std::size_t>(g.node(0, g.nz))] == -1);

    CHECK_THROWS_AS(build_grid(kModel, 10.0, 10.0, 0.3), InvalidInputError);
    CHECK_THROWS_AS(build_grid(kModel, -1.0, 10.0, 0.5), InvalidInputError);
}

TEST_CASE("grid refinement nests nodes") {
    const Grid g1 = build_grid(kModel, 8.0, 8.0, 0.5);
    const Grid g2 = build_grid(kModel, 8.0, 8.0, 0.25);
    for (int i = 0; i <= g1.nr; ++i) CHECK(g1.r_of(i) == g2.r_of(2 * i));
    for (int j = 0; j <= g1.nz; ++j) CHECK(g1.z_of(j) == g2.z_of(2 * j));
}

TEST_CASE("assembly: exact symmetry, positive mass, delta-term structure") {
    const Grid g = build_grid(kModel, 8.0, 8.0, 0.5);
    const Pencil p1 = assemble(g, kModel, Generatrix::straight_ray(kModel.theta));
    const Pencil p2 = assemble(g, ConeModel(2.0, kModel.theta),
                               Generatrix::straight_ray(kModel.theta));

    Eigen::SparseMatrix<double> At = p1.A.transpose();
    CHECK((p1.A - At).norm() == 0.0);  // assembled symmetrically, not symmetrized
    CHECK((p1.M.array() > 0.0).all());

    // alpha-linearity: K = 2 A(1) - A(2) is the pure weighted stiffness (psd),
    // B = A(1) - A(2) is the line mass (psd, supported on crossed elements)
    Eigen::SparseMatrix<double> K = 2.0 * p1.A - p2.A;
    Eigen::SparseMatrix<double> B = p1.A - p2.A;
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd x(g.ndof);
        for (int i = 0; i < g.ndof; ++i) x[i] = nd(rng);
        CHECK(x.dot(K * x) >= -1e-10 * x.squaredNorm());
        CHECK(x.dot(B * x) >= -1e-12 * x.squaredNorm());
    }

    // locality: the delta term touches only nodes of cells crossed by the ray
    for (int k = 0; k < B.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(B, k); it; ++it) {
            if (it.value() == 0.0) continue;
            // recover (i,j) of the row dof and check the ray passes nearby
            int found = -1;
            for (int i = 0; i < g.nr && found < 0; ++i)
                for (int j = 1; j < g.nz && found < 0; ++j)
                    if (g.dof[static_cast<std::size_t>(g.node(i, j))] == it.row()) found = g.node(i, j);
            const int i = found / (g.nz + 1), j = found % (g.nz + 1);
            const double r = g.r_of(i), z = g.z_of(j);
            // the ray z = r at pi/4; a node of a crossed cell is within one cell
            CHECK(std::fabs(z - r) <= g.h_r + g.h_z + 1e-12);
        }
    }
}

TEST_CASE("deformed polyline lying on the ray reproduces the straight assembly") {
    const Grid g = build_grid(kModel, 8.0, 8.0, 0.5);
    const double sn = std::sin(kModel.theta), cs = std::cos(kModel.theta);
    // an extra mid-ray vertex and an exit point beyond the box
    Generatrix poly = Generatrix::deformed(
        {{0.0, 0.0}, {5.0 * sn, 5.0 * cs}, {20.0 * sn, 20.0 * cs}}, kModel.theta, 0.0);
    const Pencil ps = assemble(g, kModel, Generatrix::straight_ray(kModel.theta));
    const Pencil pd = assemble_deformed(g, kModel, poly);
    Eigen::SparseMatrix<double> diff = ps.A - pd.A;
    const double worst = diff.coeffs().size() ? diff.coeffs().cwiseAbs().maxCoeff() : 0.0;
    CHECK(worst <= 1e-12);
    CHECK((ps.M - pd.M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generatrix invariants") {
    const double th = kModel.theta;
    const double sn = std::sin(th), cs = std::cos(th);
    // vertex off the ray beyond R0 rejected
    Generatrix bad = Generatrix::deformed(
        {{0.0, 0.0}, {2.0, 1.0}, {20.0 * sn, 20.0 * cs}}, th, 1.0);
    CHECK_THROWS_AS(bad.validate(), InvalidInputError);
    // bump inside R0 accepted (coincides with the ray beyond R0=5)
    Generatrix ok = Generatrix::deformed(
        {{0.0, 0.0}, {1.0, 0.4}, {3.0 * sn, 3.0 * cs}, {20.0 * sn, 20.0 * cs}}, th, 5.0);
    CHECK_NOTHROW(ok.validate());
    // self-intersection rejected
    Generatrix cross = Generatrix::deformed(
        {{0.0, 0.0}, {3.0, 3.0}, {3.0, 0.0}, {0.0, 2.0}, {20.0 * sn, 20.0 * cs}}, th, 100.0);
    CHECK_THROWS_AS(cross.validate(), InvalidInputError);
    // degenerate segment rejected
    Generatrix dup = Generatrix::deformed(
        {{0.0, 0.0}, {1.0 * sn, 1.0 * cs}, {1.0 * sn, 1.0 * cs}, {20.0 * sn, 20.0 * cs}}, th,
        100.0);
    CHECK_THROWS_AS(dup.validate(), InvalidInputError);
    // a generatrix that never exits the box is rejected at assembly
    const Grid g = build_grid(kModel, 8.0, 8.0, 0.5);
    Generatrix inside = Generatrix::deformed({{0.0, 0.0}, {2.0 * sn, 2.0 * cs}}, th, 100.0);
    CHECK_THROWS_AS(assemble_deformed(g, kModel, inside), InvalidInputError);
}

TEST_CASE("assembled form matches the continuum form on an interpolated field") {
    // x^T A x and x^T M x for the nodal interpolant of a smooth compactly
    // supported field must approach the weighted continuum integrals
    //   a(w) = int r |grad w|^2 - alpha int_Gamma w^2 r dl,   m(w) = int r w^2
    // at second order in h. Entirely independent code paths.
    const double th = kModel.theta;
    const auto br = make_bump_field();

    const double a_exact = continuum_form(br, kModel);
    const double m_exact = continuum_mass(br);

    std::vector<double> errs_a, errs_m;
    for (double h : {0.25, 0.125}) {
        const Grid g = build_grid(kModel, 12.0, 12.0, h);
        const Pencil p = assemble(g, kModel, Generatrix::straight_ray(th));
        Eigen::VectorXd x = Eigen::VectorXd::Zero(g.ndof);
        for (int i = 0; i < g.nr; ++i)
            for (int j = 1; j < g.nz; ++j) {
                const int d = g.dof[static_cast<std::size_t>(g.node(i, j))];
                if (d >= 0) x[d] = br.value(g.r_of(i), g.z_of(j));
            }
        errs_a.push_back(std::fabs(x.dot(p.A * x) - a_exact));
        errs_m.push_back(std::fabs(x.dot(p.M.cwiseProduct(x)) - m_exact));
    }
    CHECK(errs_a[0] / std::fabs(a_exact) < 0.05);
    CHECK(errs_m[0] / m_exact < 0.05);
    // second-order interpolation/quadrature consistency
    CHECK(errs_a[1] < 0.4 * errs_a[0]);
    CHECK(errs_m[1] < 0.4 * errs_m[0]);
}

TEST_CASE("line term stays positive semidefinite for a deformed generatrix") {
    const double th = kModel.theta;
    const double sn = std::sin(th), cs = std::cos(th);
    const Grid g = build_grid(kModel, 8.0, 8.0, 0.5);
    const Generatrix bump = Generatrix::deformed(
        {{0.0, 0.0}, {1.0 * sn + 0.5 * cs, 1.0 * cs - 0.5 * sn}, {2.0 * sn, 2.0 * cs},
         {40.0 * sn, 40.0 * cs}},
        th, 3.0);
    const Pencil p1 = assemble_deformed(g, kModel, bump);
    const Pencil p2 = assemble_deformed(g, ConeModel(2.0, th), bump);
    Eigen::SparseMatrix<double> At = p1.A.transpose();
    CHECK((p1.A - At).norm() == 0.0);
    Eigen::SparseMatrix<double> B = p1.A - p2.A;  // alpha-linear line mass
    std::mt19937_64 rng(77);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd x(g.ndof);
        for (int i = 0; i < g.ndof; ++i) x[i] = nd(rng);
        CHECK(x.dot(B * x) >= -1e-12 * x.squaredNorm());
    }
}

TEST_CASE("polyline file round trip") {
    const char* path = "test_generatrix.txt";
    {
        std::ofstream out(path);
        out << "# comment line\n0 0\n0.70710678118654746 0.70710678118654757   # on-ray\n"
           << "14.142135623730951 14.142135623730951\n\n";
    }
    const Generatrix g = load_generatrix(path, pi / 4, 0.0);
    CHECK(g.vertices.size() == 3);
    CHECK(g.vertices[1].first == doctest::Approx(std::sin(pi / 4)).epsilon(1e-15));
    CHECK_NOTHROW(g.validate());
    save_generatrix(g, path);
    const Generatrix g2 = load_generatrix(path, pi / 4, 0.0);
    CHECK(g2.vertices == g.vertices);
    {
        std::ofstream out(path);
        out << "1.0 not-a-number\n";
    }
    CHECK_THROWS_AS(load_generatrix(path, pi / 4, 0.0), InvalidInputError);
    std::remove(path);
    CHECK_THROWS_AS(load_generatrix("no_such_file.txt", pi / 4, 0.0), InvalidInputError);
}
