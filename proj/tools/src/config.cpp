#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "aggrlim/error.hpp"

namespace aggrlim::cli {

namespace {

const std::set<std::string> kKnownKeys = {
    "model", "lambda", "sigma2", "mixing", "N",      "n",     "grid",  "replicates",
    "seed",  "threads", "out",   "blocks", "budget", "suite", "sweep", "input"};

std::uint64_t as_u64(const json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i >= 0) return static_cast<std::uint64_t>(i);
  } else if (v.is_number_float()) {
    // Allows 1e6 style literals; beyond 2^53 integers must be written out.
    const double d = v.get<double>();
    if (d >= 0.0 && d <= 9007199254740992.0 && std::floor(d) == d)
      return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(what + " must be a nonnegative integer");
}

double as_double(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& what) {
  if (!v.is_string()) throw ConfigError(what + " must be a string");
  return v.get<std::string>();
}

unsigned parse_threads(std::uint64_t k, const std::string& what) {
  if (k < 1 || k > 4096) throw ConfigError(what + " must be between 1 and 4096");
  return static_cast<unsigned>(k);
}

unsigned parse_threads_text(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long k = 0;
  try {
    k = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + " must be a positive integer, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError(what + " must be a positive integer, got '" + text + "'");
  return parse_threads(k, what);
}

std::string grid_text(const TimePoint& t) { return t.to_string(); }

}  // namespace

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
}

MixingLaw parse_mixing(const json& spec) {
  if (!spec.is_object()) throw ConfigError("mixing must be an object");
  for (const auto& [key, _] : spec.items())
    if (key != "profile" && key != "beta" && key != "psi1_raw")
      throw ConfigError("unknown mixing field '" + key + "'");
  const double beta = spec.contains("beta") ? as_double(spec["beta"], "mixing.beta") : 1.0;
  const json profile = spec.value("profile", json("constant"));

  if (profile.is_string()) {
    if (profile.get<std::string>() != "constant")
      throw ConfigError("mixing.profile must be \"constant\", {\"poly\": ...} or {\"grid\": ...}");
    return MixingLaw(PsiProfile::constant(), beta);
  }
  if (!profile.is_object()) throw ConfigError("mixing.profile has an unsupported form");
  if (profile.contains("poly")) {
    const json& c = profile["poly"];
    if (!c.is_array()) throw ConfigError("mixing.profile.poly must be an array of numbers");
    std::vector<double> coeffs;
    for (const auto& v : c) coeffs.push_back(as_double(v, "mixing.profile.poly entry"));
    return MixingLaw(PsiProfile::polynomial(std::move(coeffs)), beta);
  }
  if (profile.contains("grid")) {
    const json& g = profile["grid"];
    if (!g.is_array()) throw ConfigError("mixing.profile.grid must be an array of [x, psi] pairs");
    std::vector<std::pair<double, double>> nodes;
    for (const auto& node : g) {
      if (!node.is_array() || node.size() != 2)
        throw ConfigError("mixing.profile.grid entries must be [x, psi] pairs");
      nodes.emplace_back(as_double(node[0], "grid x"), as_double(node[1], "grid psi"));
    }
    const json* raw = profile.contains("psi1_raw") ? &profile["psi1_raw"]
                      : spec.contains("psi1_raw")  ? &spec["psi1_raw"]
                                                   : nullptr;
    if (raw == nullptr) throw ConfigError("grid profile needs psi1_raw");
    return MixingLaw(PsiProfile::grid(std::move(nodes), as_double(*raw, "psi1_raw")), beta);
  }
  throw ConfigError("mixing.profile object needs a \"poly\" or \"grid\" field");
}

std::vector<TimePoint> parse_grid(const json& spec) {
  if (!spec.is_array()) throw ConfigError("grid must be an array of numbers or \"p/q\" strings");
  std::vector<TimePoint> grid;
  for (const auto& v : spec) {
    if (v.is_string())
      grid.push_back(TimePoint::parse(v.get<std::string>()));
    else if (v.is_number())
      grid.push_back(TimePoint::from_double(v.get<double>()));
    else
      throw ConfigError("grid entries must be numbers or \"p/q\" strings");
  }
  validate_grid(grid);
  return grid;
}

RunConfig resolve_config(std::string_view command, const Overrides& flags,
                         const char* env_threads) {
  RunConfig cfg;
  cfg.command = std::string(command);
  cfg.grid = {TimePoint{1, 2}, TimePoint{1, 1}};
  cfg.mixing_spec = {{"profile", "constant"}, {"beta", 1.0}};

  json file = json::object();
  if (flags.config_path) file = read_config_file(*flags.config_path);
  if (!file.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : file.items())
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config field '" + key + "'");

  if (file.contains("model")) cfg.model = parse_model(as_string(file["model"], "model"));
  const char* scale_key = cfg.model == Model::inar ? "lambda" : "sigma2";
  const char* other_key = cfg.model == Model::inar ? "sigma2" : "lambda";
  if (file.contains(other_key))
    throw ConfigError(std::string(other_key) + " does not apply to the " +
                      std::string(to_string(cfg.model)) + " model");
  if (file.contains(scale_key)) cfg.scale = as_double(file[scale_key], scale_key);
  // Validates the scale.
  if (cfg.model == Model::inar)
    ModelParams::inar(cfg.scale);
  else
    ModelParams::ar(cfg.scale);

  if (file.contains("mixing")) cfg.mixing_spec = file["mixing"];
  cfg.mixing = parse_mixing(cfg.mixing_spec);

  if (file.contains("N")) cfg.copies = as_u64(file["N"], "N");
  if (file.contains("n")) cfg.n = as_u64(file["n"], "n");
  if (file.contains("grid")) cfg.grid = parse_grid(file["grid"]);
  if (file.contains("replicates")) cfg.replicates = as_u64(file["replicates"], "replicates");
  if (file.contains("seed")) cfg.seed = as_u64(file["seed"], "seed");
  if (file.contains("blocks")) cfg.blocks = as_u64(file["blocks"], "blocks");
  if (file.contains("out")) {
    cfg.out = as_string(file["out"], "out");
    cfg.out_given = true;
  }
  if (file.contains("input")) cfg.input = as_string(file["input"], "input");
  if (file.contains("budget")) cfg.budget = parse_budget(as_string(file["budget"], "budget"));
  if (file.contains("suite")) cfg.suite = as_string(file["suite"], "suite");
  if (file.contains("sweep")) {
    const json& s = file["sweep"];
    if (!s.is_object()) throw ConfigError("sweep must be an object");
    for (const auto& [key, _] : s.items())
      if (key != "regime" && key != "values") throw ConfigError("unknown sweep field '" + key + "'");
    if (s.contains("regime")) cfg.sweep_regime = parse_regime(as_string(s["regime"], "sweep.regime"));
    if (s.contains("values")) {
      if (!s["values"].is_array() || s["values"].empty())
        throw ConfigError("sweep.values must be a nonempty array");
      cfg.sweep_values.clear();
      for (const auto& v : s["values"]) cfg.sweep_values.push_back(as_u64(v, "sweep.values entry"));
    }
  }

  if (env_threads != nullptr && *env_threads != '\0')
    cfg.threads = parse_threads_text(env_threads, "AGGRLIM_THREADS");
  if (file.contains("threads")) cfg.threads = parse_threads(as_u64(file["threads"], "threads"), "threads");

  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = parse_threads(*flags.threads, "--threads");
  if (flags.out) {
    cfg.out = *flags.out;
    cfg.out_given = true;
  }
  if (flags.budget) cfg.budget = parse_budget(*flags.budget);
  if (flags.suite) cfg.suite = *flags.suite;
  if (flags.input) cfg.input = *flags.input;

  if (cfg.copies < 1) throw ConfigError("N must be >= 1");
  if (cfg.n < 1) throw ConfigError("n must be >= 1");
  if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (cfg.out.empty()) throw ConfigError("out must name a directory");
  return cfg;
}

json canonical_config(const RunConfig& config) {
  json grid = json::array();
  for (const auto& t : config.grid) grid.push_back(grid_text(t));
  json j = {{"command", config.command}, {"seed", config.seed}};
  if (config.command == "verify") {
    j["budget"] = std::string(to_string(config.budget));
    j["suite"] = config.suite;
    return j;
  }
  j["model"] = std::string(to_string(config.model));
  j[config.model == Model::inar ? "lambda" : "sigma2"] = config.scale;
  j["mixing"] = config.mixing_spec;
  j["N"] = config.copies;
  j["n"] = config.n;
  j["grid"] = grid;
  j["replicates"] = config.replicates;
  if (config.command == "sweep") {
    j["blocks"] = config.blocks;
    j["sweep"] = {{"regime", std::string(to_string(config.sweep_regime))},
                  {"values", config.sweep_values}};
  }
  return j;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config(config).dump())));
  return buf;
}

}  // namespace aggrlim::cli
