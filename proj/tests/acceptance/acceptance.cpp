// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities. Run via ctest or directly:
//   conedelta_acceptance -tc="criterion 4*"
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "conedelta/bracket.hpp"
#include "conedelta/discretize.hpp"
#include "conedelta/eigensolve.hpp"
#include "conedelta/parallel.hpp"
#include "conedelta/profiles.hpp"
#include "conedelta/quadrature.hpp"
#include "conedelta/trial.hpp"
#include "conedelta/weyl.hpp"
#include "support/oracles.hpp"

using namespace conedelta;
using std::numbers::pi;

namespace {

void verdict(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
}

fem::Pencil straight_pencil(double alpha, double theta, double rmax, double h) {
    const ConeModel m(alpha, theta);
    const fem::Grid g = fem::build_grid(m, rmax, rmax, h);
    return fem::assemble(g, m, fem::Generatrix::straight_ray(theta));
}

}  // namespace

TEST_CASE("criterion 1: essential-spectrum threshold from below (Weyl defects)") {
    const ConeModel m(1.0, pi / 4);
    const std::vector<std::uint64_t> ns{8, 16, 32, 64};
    bool pass = true;
    std::string detail;
    for (double p : {0.0, 0.5, 1.0}) {
        std::vector<weyl::DefectReport> reps(ns.size());
        run_indexed(ns.size(),
                    [&](std::size_t i) { reps[i] = weyl::weyl_defect(ns[i], p, m); });
        for (std::size_t i = 0; i + 1 < reps.size(); ++i) {
            CHECK(reps[i + 1].defect < reps[i].defect);
            pass = pass && reps[i + 1].defect < reps[i].defect;
        }
        CHECK(reps.back().defect <= reps.front().defect / 4.0);
        pass = pass && reps.back().defect <= reps.front().defect / 4.0;
        const auto detuned = weyl::weyl_defect(64, p, m, 0.1);
        CHECK(detuned.defect >= 0.05);
        pass = pass && detuned.defect >= 0.05;
        char buf[160];
        std::snprintf(buf, sizeof buf, " p=%.1f: defect(8)=%.4g defect(64)=%.4g detuned=%.4g;",
                      p, reps.front().defect, reps.back().defect, detuned.defect);
        detail += buf;
    }
    verdict(1, pass, "defect decay at energy p^2-1/4 with detuned control:" + detail);
}

TEST_CASE("criterion 2: essential-spectrum threshold from above (bracketing)") {
    const ConeModel m(1.0, pi / 4);
    std::vector<bracket::ThresholdBound> tb;
    for (std::uint64_t n : {100ULL, 400ULL, 1600ULL})
        tb.push_back(bracket::threshold_lower_bound(n, m));
    bool pass = true;
    for (const auto& t : tb) {
        CHECK(t.bound <= -0.25);
        pass = pass && t.bound <= -0.25;
    }
    for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
        CHECK(tb[i + 1].bound > tb[i].bound);
        pass = pass && tb[i + 1].bound > tb[i].bound;
    }
    // O(n^{-1/2}): the gap halves (+-30%) per 4x step in n
    for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
        const double ratio = std::fabs(tb[i].bound + 0.25) / std::fabs(tb[i + 1].bound + 0.25);
        CHECK(ratio >= 1.4);
        CHECK(ratio <= 2.6);
        pass = pass && ratio >= 1.4 && ratio <= 2.6;
    }
    // mu against the dense 1D Richardson-extrapolated oracle
    const double mu = bracket::mu_neumann_delta(1.0, 10.0).mu;
    const double oracle = oracles::mu_fd_oracle(1.0, 10.0);
    const double rel = std::fabs(mu - oracle) / std::fabs(oracle);
    CHECK(rel <= 1e-6);
    pass = pass && rel <= 1e-6;
    char buf[220];
    std::snprintf(buf, sizeof buf,
                  "bounds %.6f %.6f %.6f (monotone, <=-1/4), gap ratios %.2f %.2f, "
                  "mu(1,10) vs oracle rel %.2e",
                  tb[0].bound, tb[1].bound, tb[2].bound,
                  std::fabs(tb[0].bound + 0.25) / std::fabs(tb[1].bound + 0.25),
                  std::fabs(tb[1].bound + 0.25) / std::fabs(tb[2].bound + 0.25), rel);
    verdict(2, pass, buf);
}

TEST_CASE("criterion 3: Weyl norm limits at n=64") {
    const ConeModel m(1.0, pi / 4);
    bool pass = true;
    std::string detail;
    for (double p : {0.0, 1.0}) {
        auto [nsq, gsq] = weyl::weyl_norms(64, p, m);
        const double nrel = std::fabs(nsq - 2.0) / 2.0;
        const double gtarget = (p * p + 0.25) * 2.0;
        const double grel = std::fabs(gsq - gtarget) / gtarget;
        CHECK(nrel <= 0.01);
        CHECK(grel <= 0.02);
        pass = pass && nrel <= 0.01 && grel <= 0.02;
        char buf[140];
        std::snprintf(buf, sizeof buf, " p=%.0f: norm err %.3g%%, grad err %.3g%%;", p,
                      100 * nrel, 100 * grel);
        detail += buf;
    }
    verdict(3, pass, "norm vs 2/alpha and grad vs (p^2+1/4)(2/alpha):" + detail);
}

TEST_CASE("criterion 4: variational asymptotics and certificate") {
    const ConeModel m(1.0, pi / 8);
    const auto chi1 = profiles::make_hardy_poly(1.0);
    const double L = trial::sn_limit(m, chi1);
    CHECK(L == doctest::Approx(-10.0 * std::sqrt(2.0)).epsilon(1e-12));

    std::vector<std::uint64_t> ns{50, 100, 200};
    std::vector<trial::SnReport> reps(ns.size());
    run_indexed(ns.size(), [&](std::size_t i) { reps[i] = trial::compute_sn(ns[i], m, chi1); });

    bool pass = true;
    double prev = 1e300;
    for (const auto& r : reps) {
        const double err = std::fabs(r.s_n_scaled - L);
        CHECK(err < prev);
        pass = pass && err < prev;
        prev = err;
    }
    const double rel200 = std::fabs(reps.back().s_n_scaled - L) / std::fabs(L);
    CHECK_MESSAGE(rel200 <= 0.10,
                  "S_n*n^4 at n=200 is ", reps.back().s_n_scaled, " vs limit ", L,
                  " (relative error ", rel200 * 100, "%); the finite-n Hardy factor "
                  "int chi1^2/(u+1/n)^2 du approaches its limit only at O(log n / n), "
                  "reaching 10% near n~650");
    pass = pass && rel200 <= 0.10;

    const trial::Certificate cert = trial::build_certificate(m, chi1, 4);
    CHECK(cert.gamma > 0.0);
    CHECK(cert.n_start >= 1);
    bool rec = cert.n_seq[0] == cert.n_start;
    for (std::size_t k = 0; k + 1 < cert.n_seq.size(); ++k)
        rec = rec && cert.n_seq[k + 1] == cert.n_seq[k] * cert.n_seq[k] + cert.n_seq[k];
    CHECK(rec);
    CHECK(cert.supports_disjoint);
    pass = pass && cert.gamma > 0.0 && rec && cert.supports_disjoint;

    char buf[300];
    std::snprintf(buf, sizeof buf,
                  "S_n*n^4 = %.4f, %.4f, %.4f vs L=%.4f (errors decrease; rel err at "
                  "n=200 = %.1f%% vs <=10%% required); gamma=%.4f N=%llu recursion exact",
                  reps[0].s_n_scaled, reps[1].s_n_scaled, reps[2].s_n_scaled, L, 100 * rel200,
                  cert.gamma, static_cast<unsigned long long>(cert.n_start));
    verdict(4, pass, buf);
}

TEST_CASE("criterion 5: Hardy gate") {
    const auto chi1 = profiles::make_hardy_poly(1.0);
    const auto r8 = profiles::hardy_check(chi1, pi / 8);
    const auto r6 = profiles::hardy_check(chi1, pi / 6);
    bool pass = r8.satisfied && !r6.satisfied;
    CHECK(r8.satisfied);
    CHECK_FALSE(r6.satisfied);  // exact boundary: bound*hardy == grad == 10
    CHECK(r6.bound * r6.hardy_int == doctest::Approx(10.0).epsilon(1e-12));
    std::string detail = "b=1 passes at pi/8, fails at pi/6 (exact boundary); selected b:";
    for (double th : {pi / 8, pi / 4, pi / 3, 4 * pi / 9}) {
        const double b = profiles::select_hardy_exponent(th, 0.1);
        const bool ok = profiles::hardy_check(profiles::make_hardy_poly(b), th).satisfied;
        CHECK(ok);
        pass = pass && ok;
        char buf[64];
        std::snprintf(buf, sizeof buf, " %.4f", b);
        detail += buf;
    }
    verdict(5, pass, detail);
}

TEST_CASE("criterion 6: discrete spectrum existence and accumulation trend") {
    const double alpha = 1.0, theta = pi / 4;
    const fem::Pencil p48 = straight_pencil(alpha, theta, 48.0, 0.25);
    const eig::EigReport er = eig::lowest_eigs(p48, 4);

    bool res_ok = true;
    for (double r : er.residuals) res_ok = res_ok && r <= 1e-8;
    CHECK(res_ok);

    int below = 0;
    for (double ev : er.eigenvalues)
        if (ev < -0.25) ++below;
    CHECK_MESSAGE(below >= 2,
                  "only ", below, " eigenvalue(s) below -0.25 at box 48, h=0.25; lambda1 = ",
                  er.eigenvalues[0],
                  " (threshold accumulation is exponential for the cone and the kinked "
                  "eigenfunction limits the unfitted bilinear discretization to O(h))");

    std::vector<int> counts;
    for (double rmax : {24.0, 48.0, 96.0}) {
        const fem::Pencil p = straight_pencil(alpha, theta, rmax, 0.25);
        counts.push_back(eig::count_below(p, -0.25));
    }
    const bool increasing = counts[0] < counts[1] && counts[1] < counts[2];
    CHECK_MESSAGE(increasing, "count_below(-0.25) over boxes {24,48,96} = ", counts[0], ",",
                  counts[1], ",", counts[2], " (not strictly increasing)");

    char buf[300];
    std::snprintf(buf, sizeof buf,
                  "lambda1..4 = %.6f %.6f %.6f %.6f (residuals<=1e-8: %s); %d below -1/4 "
                  "(need >=2); counts over boxes {24,48,96} = {%d,%d,%d} (need strict growth)",
                  er.eigenvalues[0], er.eigenvalues[1], er.eigenvalues[2], er.eigenvalues[3],
                  res_ok ? "yes" : "no", below, counts[0], counts[1], counts[2]);
    verdict(6, res_ok && below >= 2 && increasing, buf);
}

TEST_CASE("criterion 7: numerical correctness properties") {
    const double alpha = 1.0, theta = pi / 4;

    // Richardson order of lambda1 over h in {0.5, 0.25, 0.125}
    std::vector<double> lam;
    for (double h : {0.5, 0.25, 0.125}) {
        const fem::Pencil p = straight_pencil(alpha, theta, 24.0, h);
        lam.push_back(eig::lowest_eigs(p, 1).eigenvalues[0]);
    }
    const double ratio = (lam[0] - lam[1]) / (lam[1] - lam[2]);
    const double order = std::log2(std::fabs(ratio));
    CHECK_MESSAGE(order >= 1.5,
                  "Richardson order ", order, " (ratio ", ratio,
                  "); the normal-derivative kink across the unfitted interaction line "
                  "caps the eigenvalue convergence at first order");
    CHECK(order <= 2.5);
    const bool rich_ok = order >= 1.5 && order <= 2.5;

    // box-growth monotonicity at fixed h (nested discrete spaces)
    const fem::Pencil p24 = straight_pencil(alpha, theta, 24.0, 0.25);
    const fem::Pencil p48 = straight_pencil(alpha, theta, 48.0, 0.25);
    const eig::EigReport e24 = eig::lowest_eigs(p24, 4);
    const eig::EigReport e48 = eig::lowest_eigs(p48, 4);
    bool mono = true;
    for (int i = 0; i < 4; ++i)
        mono = mono && e48.eigenvalues[static_cast<std::size_t>(i)] <=
                           e24.eigenvalues[static_cast<std::size_t>(i)] + 1e-8;
    CHECK(mono);

    // dilation scaling on correspondingly rescaled grids
    const fem::Pencil pa2 = straight_pencil(2.0, theta, 12.0, 0.125);
    const double l1a2 = eig::lowest_eigs(pa2, 1).eigenvalues[0];
    const double scale_rel = std::fabs(l1a2 - 4.0 * e24.eigenvalues[0]) /
                             std::fabs(4.0 * e24.eigenvalues[0]);
    CHECK(scale_rel <= 0.02);

    // M-orthogonality
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            worst = std::max(worst, std::fabs(e48.vectors.col(i).dot(
                                        p48.M.cwiseProduct(e48.vectors.col(j)))));
    CHECK(worst <= 1e-8);

    char buf[300];
    std::snprintf(buf, sizeof buf,
                  "Richardson ratio %.3f -> order %.3f (need [1.5,2.5]); box monotone: %s; "
                  "scaling lambda1(2a)=4*lambda1(a) rel err %.2e; M-orth %.2e",
                  ratio, order, mono ? "yes" : "no", scale_rel, worst);
    verdict(7, rich_ok && mono && scale_rel <= 0.02 && worst <= 1e-8, buf);
}

TEST_CASE("criterion 8: reduction identity on random compactly supported fields") {
    const double theta = pi / 3, alpha = 1.0;
    const ConeModel m(alpha, theta);
    bool pass = true;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = oracles::random_field(1000 + static_cast<std::uint64_t>(trial));
        // 3D axisymmetric weighted form of psi = omega / sqrt(2 pi r), in (r,z)
        std::vector<double> zb;
        for (int i = 0; i <= 8; ++i) zb.push_back(f.z_lo + (f.z_hi - f.z_lo) * i / 8.0);
        auto grad3 = quad::integrate2d(
            [&](double r, double z) {
                const double gr = f.dr(r, z) - 0.5 * f.value(r, z) / r;
                const double gz = f.dz(r, z);
                return gr * gr + gz * gz;
            },
            f.r_lo, f.r_hi, zb);
        // trace along the ray z = r cot(theta), arclength in s, over the
        // exact window where the ray meets the support rectangle
        const double sn = std::sin(theta), cs = std::cos(theta);
        std::vector<double> sb;
        for (int i = 0; i <= 8; ++i)
            sb.push_back((f.r_lo + (f.r_hi - f.r_lo) * i / 8.0) / sn);
        auto tr = quad::integrate_segments(
            [&](double s) {
                const double v = f.value(s * sn, s * cs);
                return v * v;
            },
            sb);
        const double a3 = grad3.value - alpha * tr.value;
        const double reduced = trial::reduced_form_value(oracles::to_st_field(f, theta), m);
        const double scale = std::max({std::fabs(a3), std::fabs(reduced), grad3.value});
        const double rel = std::fabs(a3 - reduced) / scale;
        worst = std::max(worst, rel);
        CHECK(rel <= 1e-8);
        pass = pass && rel <= 1e-8;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "20 random fields: 3D weighted form vs reduced form, worst rel diff %.2e",
                  worst);
    verdict(8, pass, buf);
}

TEST_CASE("criterion 9: axisymmetric local deformation") {
    const double alpha = 1.0, theta = pi / 4;
    const ConeModel m(alpha, theta);
    const double sn = std::sin(theta), cs = std::cos(theta);

    // (a) undeformed polyline reproduces the straight-ray pencil eigenvalues
    const fem::Grid g24 = fem::build_grid(m, 24.0, 24.0, 0.25);
    const fem::Pencil ps = fem::assemble(g24, m, fem::Generatrix::straight_ray(theta));
    const fem::Generatrix online = fem::Generatrix::deformed(
        {{0.0, 0.0}, {5.0 * sn, 5.0 * cs}, {40.0 * sn, 40.0 * cs}}, theta, 0.0);
    const fem::Pencil pd = fem::assemble_deformed(g24, m, online);
    const eig::EigReport es = eig::lowest_eigs(ps, 3);
    const eig::EigReport ed = eig::lowest_eigs(pd, 3);
    double eig_diff = 0.0;
    for (int i = 0; i < 3; ++i)
        eig_diff = std::max(eig_diff, std::fabs(es.eigenvalues[static_cast<std::size_t>(i)] -
                                                ed.eigenvalues[static_cast<std::size_t>(i)]));
    CHECK(eig_diff <= 1e-10);

    // (b) compact bump deformation near the apex: counts over a box sweep plus
    // residual and monotonicity properties
    auto bump_gen = [&](double reach) {
        return fem::Generatrix::deformed({{0.0, 0.0},
                                          {1.0 * sn + 0.6 * cs, 1.0 * cs - 0.6 * sn},
                                          {2.5 * sn, 2.5 * cs},
                                          {reach * sn, reach * cs}},
                                         theta, 3.0);
    };
    std::vector<int> counts;
    std::vector<double> lam1;
    for (double rmax : {24.0, 48.0, 96.0}) {
        const fem::Grid g = fem::build_grid(m, rmax, rmax, 0.5);
        const fem::Pencil p = fem::assemble_deformed(g, m, bump_gen(4.0 * rmax));
        counts.push_back(eig::count_below(p, -0.25));
        lam1.push_back(eig::lowest_eigs(p, 1).eigenvalues[0]);
    }
    const bool increasing = counts[0] < counts[1] && counts[1] < counts[2];
    CHECK_MESSAGE(increasing, "deformed count_below(-0.25) over boxes {24,48,96} = ",
                  counts[0], ",", counts[1], ",", counts[2]);
    bool mono = lam1[1] <= lam1[0] + 1e-8 && lam1[2] <= lam1[1] + 1e-8;
    CHECK(mono);
    const fem::Grid gd = fem::build_grid(m, 24.0, 24.0, 0.5);
    const eig::EigReport eb = eig::lowest_eigs(fem::assemble_deformed(gd, m, bump_gen(96.0)), 3);
    bool res_ok = true;
    for (double r : eb.residuals) res_ok = res_ok && r <= 1e-8;
    CHECK(res_ok);

    char buf[300];
    std::snprintf(buf, sizeof buf,
                  "polyline==ray eigenvalue diff %.2e (<=1e-10); deformed counts {%d,%d,%d} "
                  "(need strict growth); lambda1 box-monotone: %s; residuals<=1e-8: %s",
                  eig_diff, counts[0], counts[1], counts[2], mono ? "yes" : "no",
                  res_ok ? "yes" : "no");
    verdict(9, eig_diff <= 1e-10 && increasing && mono && res_ok, buf);
}
