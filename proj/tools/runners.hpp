#pragma once

#include "conedelta/config.hpp"
#include "conedelta/report.hpp"

namespace conedelta::cli {

report::SpectralReport run_spectrum(const report::RunConfig& cfg);
report::SpectralReport run_certify(const report::RunConfig& cfg);
report::SpectralReport run_weyl(const report::RunConfig& cfg);
report::SpectralReport run_bracket(const report::RunConfig& cfg);
report::SpectralReport run_sweep(const report::RunConfig& cfg);

/// Dispatch by cfg.subcommand; writes <out>.csv/.json (and .dat on request).
report::SpectralReport run(const report::RunConfig& cfg);

}  // namespace conedelta::cli
