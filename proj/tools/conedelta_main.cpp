#include <cstdio>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "conedelta/errors.hpp"
#include "conedelta/version.hpp"
#include "runners.hpp"

namespace {

using conedelta::report::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, double& theta_deg) {
    sub->add_option("--alpha", cfg.alpha, "interaction strength (1/length), > 0");
    auto* rad = sub->add_option("--theta", cfg.theta, "cone half-angle in radians, (0, pi/2)");
    auto* deg = sub->add_option("--theta-deg", theta_deg, "cone half-angle in degrees, (0, 90)");
    rad->excludes(deg);
    sub->add_option("--out", cfg.out, "output base name (<out>.csv, <out>.json)");
    sub->add_flag("--emit-plot-data", cfg.emit_plot_data, "also write gnuplot <out>.dat");
    sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    sub->add_option("--jobs", cfg.jobs, "worker pool size (0: hardware)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for attractive delta interactions on conical surfaces"};
    app.set_help_flag("--help", "print help");  // frees -h / --h for the grid spacing
    app.set_version_flag("--version", conedelta::kVersion);
    app.set_config("--config", "", "key = value config file (flags override)");
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.theta = std::numbers::pi / 4.0;
    double theta_deg = 0.0;

    auto* spectrum = app.add_subcommand("spectrum", "assemble the pencil and solve for the lowest eigenpairs");
    auto* certify = app.add_subcommand("certify", "Hardy gate, S_n sweep and eigenvalue certificate");
    auto* weylc = app.add_subcommand("weyl", "singular-sequence defect sweeps");
    auto* bracketc = app.add_subcommand("bracket", "1D comparison eigenvalue and threshold lower bounds");
    auto* sweep = app.add_subcommand("sweep", "parameter sweeps with inline consistency checks");
    for (CLI::App* sub : {spectrum, certify, weylc, bracketc, sweep}) {
        sub->set_help_flag("--help", "print help");
        add_common(sub, cfg, theta_deg);
    }

    spectrum->add_option("--rmax", cfg.rmax, "radial box size (0: 24/alpha)");
    spectrum->add_option("--zext", cfg.zext, "half z-extent (0: rmax)");
    spectrum->add_option("--h", cfg.h, "grid spacing (0: 0.25/alpha)");
    spectrum->add_option("-k,--k", cfg.k, "number of eigenpairs");
    double shift_val = 0.0;
    auto* shift_opt = spectrum->add_option("--shift", shift_val, "shift-invert target (default: below the spectrum)");
    spectrum->add_option("--generatrix", cfg.generatrix_path, "polyline file (r z per line) replacing the straight ray");
    spectrum->add_option("--deform-r0", cfg.deform_r0, "deformation radius for the polyline check");

    double b_exp_val = 0.0;
    auto* bopt = certify->add_option("--b-exp", b_exp_val, "Hardy exponent (default: auto-select)");
    certify->add_option("--margin", cfg.margin, "Hardy selection margin in (0,1)");
    certify->add_option("--safety", cfg.safety, "certificate safety factor in (0,1)");
    certify->add_option("--kmax", cfg.k_max, "certificate depth (indices n_1..n_k)");
    certify->add_option("--n", cfg.n_list, "S_n sweep indices")->delimiter(',');

    weylc->add_option("--p", cfg.p_list, "wavenumbers (default 0,0.5,1)")->delimiter(',');
    weylc->add_option("--n", cfg.n_list, "indices (default 8,16,32,64)")->delimiter(',');
    weylc->add_option("--detune", cfg.detune, "energy detuning for the control column");

    bracketc->add_option("--n", cfg.n_list, "bracketing parameters (default 100,400,1600)")->delimiter(',');
    bracketc->add_option("--lengths", cfg.ey_lengths, "interval lengths for the exponential-law fit")->delimiter(',');

    sweep->add_option("--vary", cfg.vary, "alpha | theta | box | h")->required();
    sweep->add_option("--values", cfg.values, "sweep values")->required()->delimiter(',');
    sweep->add_option("--rmax", cfg.rmax, "base radial box size");
    sweep->add_option("--zext", cfg.zext, "base half z-extent");
    sweep->add_option("--h", cfg.h, "base grid spacing");
    sweep->add_option("-k,--k", cfg.k, "eigenpairs per point");

    CLI11_PARSE(app, argc, argv);

    try {
        if (theta_deg != 0.0) cfg.theta = theta_deg * std::numbers::pi / 180.0;
        if (shift_opt->count() > 0) cfg.shift = shift_val;
        if (bopt->count() > 0) cfg.b_exp = b_exp_val;
        cfg.subcommand = app.get_subcommands().front()->get_name();
        cfg.validate();
        const auto rep = conedelta::cli::run(cfg);
        std::cout << "wrote " << cfg.out << ".csv and " << cfg.out << ".json";
        if (cfg.emit_plot_data) std::cout << " and " << cfg.out << ".dat";
        std::cout << "\n";
        for (const auto& [k, v] : rep.scalars) std::printf("  %-28s %.15g\n", k.c_str(), v);
        for (const auto& [k, v] : rep.notes) std::printf("  %-28s %s\n", k.c_str(), v.c_str());
        return 0;
    } catch (const conedelta::InvalidInputError& e) {
        std::cerr << "error (invalid input): " << e.what() << "\n";
        return 1;
    } catch (const conedelta::NumericalFailure& e) {
        std::cerr << "error (numerical failure): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
