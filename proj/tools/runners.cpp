#include "runners.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "conedelta/bracket.hpp"
#include "conedelta/discretize.hpp"
#include "conedelta/eigensolve.hpp"
#include "conedelta/errors.hpp"
#include "conedelta/parallel.hpp"
#include "conedelta/profiles.hpp"
#include "conedelta/trial.hpp"
#include "conedelta/weyl.hpp"

namespace conedelta::cli {

using report::CsvTable;
using report::RunConfig;
using report::SpectralReport;

namespace {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

fem::Pencil build_pencil(const RunConfig& cfg, double rmax, double zext, double h) {
    const ConeModel model = cfg.model();
    const fem::Grid grid = fem::build_grid(model, rmax, zext, h);
    if (!cfg.generatrix_path.empty()) {
        const auto gen = fem::load_generatrix(cfg.generatrix_path, cfg.theta, cfg.deform_r0);
        return fem::assemble_deformed(grid, model, gen);
    }
    return fem::assemble(grid, model, fem::Generatrix::straight_ray(cfg.theta));
}

}  // namespace

SpectralReport run_spectrum(const RunConfig& cfg) {
    Timer t;
    SpectralReport rep = report::make_report(cfg);
    const ConeModel model = cfg.model();
    const fem::Pencil pencil = build_pencil(cfg, cfg.rmax, cfg.zext, cfg.h);
    rep.timings_ms.emplace_back("assemble", t.ms());

    Timer ts;
    const eig::EigReport er = eig::lowest_eigs(pencil, cfg.k, cfg.shift);
    rep.timings_ms.emplace_back("eigensolve", ts.ms());

    CsvTable tab;
    tab.name = "spectrum";
    tab.header = {"index", "eigenvalue", "residual", "below_threshold"};
    for (std::size_t i = 0; i < er.eigenvalues.size(); ++i)
        tab.rows.push_back({static_cast<double>(i + 1), er.eigenvalues[i], er.residuals[i],
                            er.eigenvalues[i] < model.threshold() ? 1.0 : 0.0});
    rep.tables.push_back(std::move(tab));
    rep.add_scalar("threshold", model.threshold());
    rep.add_scalar("ndof", pencil.grid.ndof);
    rep.add_scalar("count_below_threshold", er.count_below_threshold);
    rep.add_scalar("shift", er.shift);
    rep.add_scalar("iterations", er.iterations);
    rep.add_note("generatrix", pencil.generatrix_desc);
    rep.add_note("all_converged", er.all_converged ? "true" : "false");

    // sanity: no eigenvalue may fall below the support-scale form lower bound
    const double cot = 1.0 / std::tan(cfg.theta);
    const std::uint64_t n_support = static_cast<std::uint64_t>(std::ceil(cot * cot)) + 8;
    const auto tb = bracket::threshold_lower_bound(n_support, model);
    const bool consistent = bracket::bracketing_consistency(er.eigenvalues, tb);
    rep.add_scalar("form_lower_bound", tb.bound);
    rep.add_scalar("bracketing_margin", er.eigenvalues.front() - tb.bound);
    rep.add_note("bracketing_consistent", consistent ? "true" : "false");
    if (!consistent)
        throw NumericalFailure("spectrum: eigenvalue below the global form lower bound");
    if (!er.all_converged) throw NumericalFailure("spectrum: eigensolver did not converge");
    return rep;
}

SpectralReport run_certify(const RunConfig& cfg) {
    Timer t;
    SpectralReport rep = report::make_report(cfg);
    const ConeModel model = cfg.model();
    const double b = cfg.b_exp ? *cfg.b_exp
                               : profiles::select_hardy_exponent(cfg.theta, cfg.margin);
    const auto chi1 = profiles::make_hardy_poly(b);
    const auto hardy = profiles::hardy_check(chi1, cfg.theta);
    rep.add_scalar("b_exp", b);
    rep.add_scalar("hardy_grad_sq", hardy.grad_sq);
    rep.add_scalar("hardy_int", hardy.hardy_int);
    rep.add_scalar("hardy_bound", hardy.bound);
    rep.add_scalar("hardy_margin", hardy.margin);
    rep.add_note("hardy_satisfied", hardy.satisfied ? "true" : "false");
    if (!hardy.satisfied)
        throw InvalidInputError("certify: Hardy condition fails for b_exp=" + std::to_string(b) +
                                " at this angle; pick a smaller exponent or angle");

    const trial::Certificate cert =
        trial::build_certificate(model, chi1, cfg.k_max, cfg.safety);
    rep.add_scalar("limit_L", cert.limit_L);
    rep.add_scalar("gamma", cert.gamma);
    rep.add_scalar("n_start", static_cast<double>(cert.n_start));
    rep.add_note("supports_disjoint", cert.supports_disjoint ? "true" : "false");
    rep.add_note("chi1", cert.chi1_desc);
    if (cert.truncated)
        rep.add_note("certificate_truncated",
                     "n_k recursion left the exact 64-bit range after k=" +
                         std::to_string(cert.n_seq.size()));

    CsvTable bounds;
    bounds.name = "certificate";
    bounds.header = {"k", "n_k", "bound_offset", "bound", "sn_scaled"};
    for (std::size_t i = 0; i < cert.n_seq.size(); ++i)
        bounds.rows.push_back({static_cast<double>(i + 1), static_cast<double>(cert.n_seq[i]),
                               cert.bound_offsets[i], cert.bounds[i], cert.sn_scaled_at_nk[i]});
    rep.tables.push_back(std::move(bounds));

    std::vector<std::uint64_t> ns = cfg.n_list;
    if (ns.empty()) ns = {25, 50, 100, 200};
    CsvTable sweep;
    sweep.name = "sn_sweep";
    sweep.header = {"n", "eps", "grad_term", "i_n", "j_n", "trace_term", "norm_term", "s_n",
                    "s_n_scaled", "err_scaled"};
    std::vector<trial::SnReport> rows(ns.size());
    run_indexed(ns.size(),
                [&](std::size_t i) { rows[i] = trial::compute_sn(ns[i], model, chi1); },
                cfg.jobs);
    for (const auto& r : rows)
        sweep.rows.push_back({static_cast<double>(r.n), r.eps, r.grad_term, r.i_n, r.j_n,
                              r.trace_term, r.norm_term, r.s_n, r.s_n_scaled, r.err_scaled});
    rep.tables.push_back(std::move(sweep));
    rep.timings_ms.emplace_back("certify", t.ms());
    return rep;
}

SpectralReport run_weyl(const RunConfig& cfg) {
    Timer t;
    SpectralReport rep = report::make_report(cfg);
    const ConeModel model = cfg.model();
    std::vector<double> ps = cfg.p_list;
    if (ps.empty()) ps = {0.0, 0.5, 1.0};
    std::vector<std::uint64_t> ns = cfg.n_list;
    if (ns.empty()) ns = {8, 16, 32, 64};

    struct Row {
        weyl::DefectReport on, off;
    };
    std::vector<Row> rows(ps.size() * ns.size());
    run_indexed(rows.size(),
                [&](std::size_t idx) {
                    const double p = ps[idx / ns.size()];
                    const std::uint64_t n = ns[idx % ns.size()];
                    rows[idx].on = weyl::weyl_defect(n, p, model, 0.0);
                    rows[idx].off = weyl::weyl_defect(n, p, model, cfg.detune);
                },
                cfg.jobs);

    CsvTable tab;
    tab.name = "weyl";
    tab.header = {"n", "p", "norm_sq", "grad_sq", "target_energy", "defect", "defect_detuned"};
    for (const auto& r : rows)
        tab.rows.push_back({static_cast<double>(r.on.n), r.on.p, r.on.norm_sq, r.on.grad_sq,
                            r.on.target_energy, r.on.defect, r.off.defect});
    rep.tables.push_back(std::move(tab));

    double jump_worst = 0.0;
    for (double p : ps)
        jump_worst = std::max(jump_worst,
                              weyl::jump_residual(weyl::WeylFunction::make(ns.back(), p, model)));
    rep.add_scalar("jump_residual_max", jump_worst);
    for (double p : ps) {
        weyl::SweepResult sr = weyl::weyl_sweep(p, ns, model);
        std::ostringstream key;
        key << "decay_exponent_p" << p;
        rep.add_scalar(key.str(), sr.fitted_decay_exponent);
    }
    rep.timings_ms.emplace_back("weyl", t.ms());
    return rep;
}

SpectralReport run_bracket(const RunConfig& cfg) {
    Timer t;
    SpectralReport rep = report::make_report(cfg);
    const ConeModel model = cfg.model();
    std::vector<std::uint64_t> ns = cfg.n_list;
    if (ns.empty()) ns = {100, 400, 1600};

    CsvTable tab;
    tab.name = "bracket";
    tab.header = {"n", "c_n", "beta_eff", "mu", "bound", "gap_to_threshold"};
    for (auto n : ns) {
        const auto tb = bracket::threshold_lower_bound(n, model);
        tab.rows.push_back({static_cast<double>(n), tb.c_n, tb.beta_eff, tb.mu_val, tb.bound,
                            std::fabs(tb.bound - model.threshold())});
    }
    rep.tables.push_back(std::move(tab));

    std::vector<double> Ls = cfg.ey_lengths;
    if (Ls.empty()) Ls = {4.0, 8.0, 16.0, 32.0};
    CsvTable mus;
    mus.name = "mu";
    mus.header = {"L", "kappa", "mu", "gap", "residual", "iterations"};
    for (double L : Ls) {
        const auto m = bracket::mu_neumann_delta(model.alpha, L);
        mus.rows.push_back({L, m.kappa, m.mu, -(m.mu + 0.25 * model.alpha * model.alpha),
                            m.residual, static_cast<double>(m.iterations)});
    }
    rep.tables.push_back(std::move(mus));

    const auto fit = bracket::gap_law_fit(model.alpha, Ls);
    rep.add_scalar("gap_law_c_fit", fit.c_fit);
    rep.add_note("gap_law_verified", fit.verified ? "true" : "false");
    rep.timings_ms.emplace_back("bracket", t.ms());
    return rep;
}

SpectralReport run_sweep(const RunConfig& cfg) {
    Timer t;
    SpectralReport rep = report::make_report(cfg);
    if (cfg.vary.empty() || cfg.values.size() < 2)
        throw InvalidInputError("sweep: requires --vary and at least two --values");

    CsvTable tab;
    tab.name = "sweep";
    tab.header = {"value", "lambda1", "lambda2", "residual1", "count_below"};
    std::vector<std::vector<double>> rows(cfg.values.size());
    run_indexed(cfg.values.size(),
                [&](std::size_t i) {
                    RunConfig c = cfg;
                    const double v = cfg.values[i];
                    if (cfg.vary == "alpha") {
                        // dilation-covariant grid: box and spacing scale as 1/alpha
                        const double ratio = cfg.alpha / v;
                        c.alpha = v;
                        c.rmax = cfg.rmax * ratio;
                        c.zext = cfg.zext * ratio;
                        c.h = cfg.h * ratio;
                    } else if (cfg.vary == "theta") {
                        c.theta = v;
                    } else if (cfg.vary == "box") {
                        c.rmax = v;
                        c.zext = v;
                    } else {
                        c.h = v;
                    }
                    const fem::Pencil p = build_pencil(c, c.rmax, c.zext, c.h);
                    const eig::EigReport er = eig::lowest_eigs(p, std::max(2, cfg.k), c.shift);
                    rows[i] = {v, er.eigenvalues[0],
                               er.eigenvalues.size() > 1 ? er.eigenvalues[1] : 0.0,
                               er.residuals[0], static_cast<double>(er.count_below_threshold)};
                },
                cfg.jobs);
    tab.rows = rows;
    rep.tables.push_back(std::move(tab));

    // inline checks
    if (cfg.vary == "box") {
        bool mono = true;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i)
            if (rows[i + 1][1] > rows[i][1] + 1e-8) mono = false;
        rep.add_note("box_monotone_nonincreasing", mono ? "true" : "false");
    } else if (cfg.vary == "h" && rows.size() >= 3) {
        const double d1 = rows[rows.size() - 3][1] - rows[rows.size() - 2][1];
        const double d2 = rows[rows.size() - 2][1] - rows.back()[1];
        const double ratio = d1 / d2;
        rep.add_scalar("richardson_ratio", ratio);
        rep.add_scalar("richardson_order", std::log2(std::fabs(ratio)));
    } else if (cfg.vary == "alpha") {
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const double c = rows[i + 1][0] / rows[i][0];
            const double expect = c * c * rows[i][1];
            std::ostringstream key;
            key << "scaling_residual_" << rows[i][0] << "_to_" << rows[i + 1][0];
            rep.add_scalar(key.str(), std::fabs(rows[i + 1][1] - expect) /
                                          std::max(1e-300, std::fabs(expect)));
        }
    }
    rep.timings_ms.emplace_back("sweep", t.ms());
    return rep;
}

SpectralReport run(const RunConfig& cfg) {
    SpectralReport rep;
    std::string xcol, ycol;
    if (cfg.subcommand == "spectrum") {
        rep = run_spectrum(cfg);
        xcol = "index"; ycol = "eigenvalue";
    } else if (cfg.subcommand == "certify") {
        rep = run_certify(cfg);
        xcol = "k"; ycol = "bound";
    } else if (cfg.subcommand == "weyl") {
        rep = run_weyl(cfg);
        xcol = "n"; ycol = "defect";
    } else if (cfg.subcommand == "bracket") {
        rep = run_bracket(cfg);
        xcol = "n"; ycol = "bound";
    } else if (cfg.subcommand == "sweep") {
        rep = run_sweep(cfg);
        xcol = "value"; ycol = "lambda1";
    } else {
        throw InvalidInputError("unknown subcommand: " + cfg.subcommand);
    }
    rep.write_files(cfg.out, cfg.emit_plot_data, xcol, ycol);
    return rep;
}

}  // namespace conedelta::cli
