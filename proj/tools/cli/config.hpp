#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "aggrlim/mixing.hpp"
#include "aggrlim/processes.hpp"
#include "aggrlim/theory.hpp"
#include "aggrlim/time_grid.hpp"
#include "aggrlim/verification.hpp"

namespace aggrlim::cli {

using nlohmann::json;

// Values given on the command line. Each one, when present, replaces the
// matching config field.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::optional<std::string> budget;
  std::optional<std::string> suite;
  std::optional<std::string> input;
};

struct RunConfig {
  std::string command;
  Model model = Model::inar;
  double scale = 1.0;  // lambda or sigma2
  json mixing_spec;
  MixingLaw mixing = MixingLaw(PsiProfile::constant(), 1.0);
  std::uint64_t copies = 1000;  // N
  std::uint64_t n = 1000;
  std::vector<TimePoint> grid;
  std::uint64_t replicates = 400;
  std::uint64_t seed = kDefaultVerifySeed;
  unsigned threads = 1;
  std::string out = "aggrlim-out";
  bool out_given = false;
  std::size_t blocks = 0;
  Budget budget = Budget::standard;
  std::string suite = "all";
  Regime sweep_regime = Regime::N_first;
  std::vector<std::uint64_t> sweep_values = {100, 1000, 10000};
  std::string input;  // report only
};

// Resolution order, highest first: command-line flags, the config file,
// AGGRLIM_THREADS (threads only), built-in defaults. Throws ConfigError.
RunConfig resolve_config(std::string_view command, const Overrides& flags,
                         const char* env_threads);

json read_config_file(const std::string& path);
MixingLaw parse_mixing(const json& spec);
std::vector<TimePoint> parse_grid(const json& spec);

// The fields that determine a command's output; threads and paths excluded.
json canonical_config(const RunConfig& config);
std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash(const RunConfig& config);

}  // namespace aggrlim::cli
