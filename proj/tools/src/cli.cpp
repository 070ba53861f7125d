#include <cstdlib>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "aggrlim/error.hpp"
#include "commands.hpp"

namespace aggrlim::cli {

namespace {

constexpr const char* kPrecedence =
    "Settings are resolved as: command-line flags, then the --config JSON file, then\n"
    "AGGRLIM_THREADS (thread count only), then built-in defaults.\n"
    "Exit codes: 0 pass, 1 acceptance failure, 2 config error, 3 runtime abort.";

constexpr const char* kConfigKeys =
    "Config keys: model (\"inar\" | \"ar\"), lambda | sigma2, mixing {profile: \"constant\" |\n"
    "{\"poly\": [c0, c1, ...]} | {\"grid\": [[x, psi], ...], \"psi1_raw\": v}, beta}, N, n,\n"
    "grid (numbers or \"p/q\" strings), replicates, seed, threads, out, blocks, budget,\n"
    "suite, sweep {regime: \"N_first\" | \"n_first\", values: [...]}, input.";

constexpr const char* kReportColumns =
    "Reads panel.csv, sweep.csv and verify_checks.csv style files from the input\n"
    "directory (default: --out) and prints one table per file. Nothing is simulated.\n"
    "\n"
    "Panel table columns:\n"
    "  t            grid time\n"
    "  R            replicates at t\n"
    "  var_N_first  sample variance of S_normalized_N_first\n"
    "  ref          limit variance for N-first normalization times t\n"
    "  var_n_first  sample variance of S_normalized_n_first\n"
    "  ref          limit variance for n-first normalization times t\n"
    "Sweep table columns:\n"
    "  regime, N, n    the swept configuration\n"
    "  max_dev_limit   max relative deviation of the covariance estimate from c min(s, t)\n"
    "  max_dev_exact   max relative deviation from the exact finite-size covariance\n"
    "Plot data, <stem>_plot.csv next to the inputs (or in --out when given):\n"
    "  t, empirical, reference   variance at t (panel) or covariance diagonal at the\n"
    "                            last swept value (sweep) against its limit";

struct Flags {
  std::string config, out, budget, suite, input;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_option("--seed", f.seed, "Master seed (unsigned 64-bit)");
  sub->add_option("--threads", f.threads, "Worker threads; results never depend on it");
  sub->add_option("--out", f.out, "Output directory");
}

Overrides collect(CLI::App* sub, const Flags& f) {
  Overrides o;
  if (sub->count("--config")) o.config_path = f.config;
  if (sub->count("--seed")) o.seed = f.seed;
  if (sub->count("--threads")) o.threads = f.threads;
  if (sub->count("--out")) o.out = f.out;
  if (sub->get_option_no_throw("--budget") && sub->count("--budget")) o.budget = f.budget;
  if (sub->get_option_no_throw("--suite") && sub->count("--suite")) o.suite = f.suite;
  if (sub->get_option_no_throw("--input") && sub->count("--input")) o.input = f.input;
  return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aggregated random-coefficient AR(1) / INAR(1) panels: simulation, "
               "verification and reports.",
               "aggrlim"};
  app.footer(std::string(kPrecedence) + "\n" + kConfigKeys);
  app.set_version_flag("--version", AGGRLIM_VERSION);
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate-panel", "Simulate replicates of the aggregated panel");
  simulate->footer("Writes <out>/panel.csv with columns replicate, t, S_raw, S_normalized_N_first,\n"
                   "S_normalized_n_first (\"nan\" where a normalization needs N or n >= 2).");
  add_common(simulate, f);

  auto* verify = app.add_subcommand("verify", "Run acceptance criteria");
  add_common(verify, f);
  verify->add_option("--suite", f.suite, "exact | mc | slope | tail | cf | all (default all)");
  verify->add_option("--budget", f.budget, "small | default | large");
  verify->footer("Writes <out>/verify_checks.csv and <out>/verify_summary.json.");

  auto* sweep = app.add_subcommand("sweep", "Iterated-limit covariance sweep");
  add_common(sweep, f);
  sweep->footer("Writes <out>/sweep.csv with columns regime, N, n, replicates, blocks, seed, i, j,\n"
                "t_i, t_j, estimate, lower, upper, plain, limit_reference, exact_reference.");

  auto* report = app.add_subcommand("report", "Summarize existing outputs");
  add_common(report, f);
  report->add_option("--input", f.input, "Directory holding earlier outputs (default: --out)");
  report->footer(kReportColumns);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    const RunConfig config =
        resolve_config(chosen->get_name(), collect(chosen, f), std::getenv("AGGRLIM_THREADS"));
    if (chosen == simulate) return cmd_simulate_panel(config, out);
    if (chosen == verify) return cmd_verify(config, out);
    if (chosen == sweep) return cmd_sweep(config, out);
    return cmd_report(config, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const RuntimeAbort& e) {
    err << "aborted: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace aggrlim::cli
