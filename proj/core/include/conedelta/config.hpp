#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conedelta/geometry.hpp"

namespace conedelta::report {

/// Validated run configuration shared by all CLI subcommands. Angles are
/// radians internally; degrees are accepted only at the CLI boundary and
/// converted once.
struct RunConfig {
    std::string subcommand;

    double alpha = 1.0;
    double theta = 0.0;  // radians, resolved

    // grid / spectrum
    double rmax = 0.0;   // 0: derive 24/alpha
    double zext = 0.0;   // 0: same as rmax
    double h = 0.0;      // 0: derive 0.25/alpha
    int k = 8;
    std::optional<double> shift;
    std::string generatrix_path;  // optional polyline file
    double deform_r0 = 0.0;

    // trial / certify
    std::optional<double> b_exp;  // absent: auto-select
    double margin = 0.1;
    double safety = 0.5;
    int k_max = 4;
    std::vector<std::uint64_t> n_list;

    // weyl / bracket
    std::vector<double> p_list;
    double detune = 0.1;
    std::vector<double> ey_lengths;

    // sweep
    std::string vary;             // alpha | theta | box | h
    std::vector<double> values;

    // io
    std::string out = "report";
    bool emit_plot_data = false;
    std::uint64_t seed = 20240901;
    unsigned jobs = 0;

    /// Checks every physical precondition with an actionable message and
    /// fills derived defaults. Throws InvalidInputError.
    void validate();

    ConeModel model() const { return ConeModel(alpha, theta); }

    /// Ordered key/value echo for report provenance.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

}  // namespace conedelta::report
