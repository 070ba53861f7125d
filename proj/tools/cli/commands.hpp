#pragma once

#include <ostream>

#include "config.hpp"

namespace aggrlim::cli {

// <out>/panel.csv: replicate,t,S_raw,S_normalized_N_first,S_normalized_n_first.
int cmd_simulate_panel(const RunConfig& config, std::ostream& log);
// <out>/verify_checks.csv and <out>/verify_summary.json. Returns 1 when a
// gating criterion fails.
int cmd_verify(const RunConfig& config, std::ostream& log);
// <out>/sweep.csv, one line per covariance entry per swept value.
int cmd_sweep(const RunConfig& config, std::ostream& log);
// Tables for every aggrlim CSV in the input directory plus <stem>_plot.csv
// files (t,empirical,reference). Never simulates.
int cmd_report(const RunConfig& config, std::ostream& log);

// Full command line, including argument parsing and the exit-code mapping:
// 0 pass, 1 acceptance failure, 2 config error, 3 runtime abort.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aggrlim::cli
