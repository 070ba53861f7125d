#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>

#include "aggrlim/aggregation.hpp"
#include "aggrlim/error.hpp"
#include "aggrlim/stats.hpp"
#include "output.hpp"

namespace aggrlim::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ModelParams model_params(const RunConfig& c) {
  return c.model == Model::inar ? ModelParams::inar(c.scale) : ModelParams::ar(c.scale);
}

double limit_constant(const RunConfig& c, Regime regime) {
  return limit_variance_constant(LimitSpec{c.model, regime, c.scale, c.mixing.psi1()});
}

std::string fixed(double v, int precision) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void print_check(std::ostream& log, const Check& c) {
  log << "   " << (c.pass ? "ok" : "XX") << ' ' << c.name << " est=" << format_double(c.estimate)
      << " ref=" << format_double(c.reference) << " band=[" << format_double(c.band_lo) << ", "
      << format_double(c.band_hi) << "]\n";
}

// Sample variance of the finite entries.
double finite_variance(const std::vector<double>& xs) {
  std::vector<double> v;
  for (double x : xs)
    if (std::isfinite(x)) v.push_back(x);
  return v.size() >= 2 ? sample_variance(v) : kNaN;
}

void write_plot(const fs::path& path, const CsvTable& source,
                const std::vector<std::array<double, 3>>& points) {
  AtomicFile file(path);
  auto& os = file.stream();
  os << "# source: " << source.path.filename().string() << '\n';
  for (const char* key : {"aggrlim_version", "seed", "config_hash"}) {
    auto it = source.meta.find(key);
    if (it != source.meta.end()) os << "# " << key << ": " << it->second << '\n';
  }
  os << "t,empirical,reference\n";
  for (const auto& p : points)
    os << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(p[2]) << '\n';
  file.commit();
}

void report_panel(const CsvTable& t, const fs::path& plot_dir, std::ostream& log) {
  const std::size_t ct = t.column("t"), cN = t.column("S_normalized_N_first"),
                    cn = t.column("S_normalized_n_first");
  auto meta = [&](const char* key) {
    auto it = t.meta.find(key);
    return it == t.meta.end() ? kNaN : parse_double(it->second);
  };
  const double limit_N = meta("limit_variance_N_first"), limit_n = meta("limit_variance_n_first");

  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_t;
  for (const auto& row : t.rows) {
    if (!by_t.count(row[ct])) order.push_back(row[ct]);
    by_t[row[ct]].first.push_back(parse_double(row[cN]));
    by_t[row[ct]].second.push_back(parse_double(row[cn]));
  }
  auto text = [&](const char* key) {
    auto it = t.meta.find(key);
    return it == t.meta.end() ? std::string("?") : it->second;
  };
  log << t.path.filename().string() << ": panel, seed " << text("seed") << ", config "
      << text("config_hash") << '\n';
  log << pad("t", 10) << pad("R", 8) << pad("var_N_first", 14) << pad("ref", 12)
      << pad("var_n_first", 14) << pad("ref", 12) << '\n';
  std::vector<std::array<double, 3>> points;
  for (const auto& key : order) {
    const double tv = parse_double(key);
    const auto& [sN, sn] = by_t[key];
    const double vN = finite_variance(sN), vn = finite_variance(sn);
    log << pad(fixed(tv, 4), 10) << pad(std::to_string(sN.size()), 8) << pad(fixed(vN, 5), 14)
        << pad(fixed(limit_N * tv, 5), 12) << pad(fixed(vn, 5), 14) << pad(fixed(limit_n * tv, 5), 12)
        << '\n';
    points.push_back({tv, vN, limit_N * tv});
  }
  const fs::path plot = plot_dir / (t.path.stem().string() + "_plot.csv");
  write_plot(plot, t, points);
  log << "plot data: " << plot.string() << "\n\n";
}

void report_sweep(const CsvTable& t, const fs::path& plot_dir, std::ostream& log) {
  const std::size_t creg = t.column("regime"), cN = t.column("N"), cn = t.column("n"),
                    ci = t.column("i"), cj = t.column("j"), cti = t.column("t_i"),
                    cest = t.column("estimate"), clim = t.column("limit_reference"),
                    cex = t.column("exact_reference");
  struct Group {
    std::string regime, N, n;
    double dev_limit = 0.0, dev_exact = 0.0;
    std::vector<std::array<double, 3>> diagonal;
  };
  std::vector<Group> groups;
  for (const auto& row : t.rows) {
    if (groups.empty() || groups.back().regime != row[creg] || groups.back().N != row[cN] ||
        groups.back().n != row[cn])
      groups.push_back({row[creg], row[cN], row[cn], 0.0, 0.0, {}});
    Group& g = groups.back();
    const double est = parse_double(row[cest]), lim = parse_double(row[clim]),
                 ex = parse_double(row[cex]);
    if (lim != 0.0) g.dev_limit = std::max(g.dev_limit, std::abs(est - lim) / std::abs(lim));
    if (ex != 0.0) g.dev_exact = std::max(g.dev_exact, std::abs(est - ex) / std::abs(ex));
    if (row[ci] == row[cj]) g.diagonal.push_back({parse_double(row[cti]), est, lim});
  }
  log << t.path.filename().string() << ": iterated-limit sweep\n";
  log << pad("regime", 8) << pad("N", 12) << pad("n", 12) << pad("max_dev_limit", 15)
      << pad("max_dev_exact", 15) << '\n';
  for (const auto& g : groups)
    log << pad(g.regime, 8) << pad(g.N, 12) << pad(g.n, 12) << pad(fixed(g.dev_limit, 4), 15)
        << pad(fixed(g.dev_exact, 4), 15) << '\n';
  if (!groups.empty()) {
    const fs::path plot = plot_dir / (t.path.stem().string() + "_plot.csv");
    write_plot(plot, t, groups.back().diagonal);
    log << "plot data (diagonal at the last swept value): " << plot.string() << '\n';
  }
  log << '\n';
}

void report_checks(const CsvTable& t, std::ostream& log) {
  const std::size_t cc = t.column("criterion"), cname = t.column("check"),
                    cest = t.column("estimate"), cref = t.column("reference"),
                    clo = t.column("band_lo"), chi = t.column("band_hi"), cp = t.column("pass");
  log << t.path.filename().string() << ": verification checks\n";
  std::size_t failed = 0;
  for (const auto& row : t.rows) {
    const bool pass = row[cp] == "1";
    if (!pass) ++failed;
    log << pad(row[cc], 4) << "  " << (pass ? "ok" : "XX") << "  " << row[cname]
        << "  est=" << row[cest] << " ref=" << row[cref] << " band=[" << row[clo] << ", "
        << row[chi] << "]\n";
  }
  log << t.rows.size() << " checks, " << failed << " outside their band\n\n";
}

}  // namespace

int cmd_simulate_panel(const RunConfig& c, std::ostream& log) {
  PanelSpec spec;
  spec.copies = c.copies;
  spec.n = c.n;
  spec.grid = c.grid;
  spec.params = model_params(c);
  spec.mixing = c.mixing;
  spec.seed = c.seed;
  spec.validate();
  const double limit_N = limit_constant(c, Regime::N_first);
  const double limit_n = limit_constant(c, Regime::n_first);

  fs::create_directories(c.out);
  const fs::path path = fs::path(c.out) / "panel.csv";
  AtomicFile file(path);
  auto& os = file.stream();
  write_metadata(os, c, {{"limit_variance_N_first", format_double(limit_N)},
                         {"limit_variance_n_first", format_double(limit_n)}});
  os << "replicate,t,S_raw,S_normalized_N_first,S_normalized_n_first\n";

  const std::vector<double> undefined(c.grid.size(), kNaN);
  const std::uint64_t batch = std::max<std::uint64_t>(16, 4ull * c.threads);
  for (std::uint64_t first = 0; first < c.replicates; first += batch) {
    const std::uint64_t count = std::min(batch, c.replicates - first);
    for (const auto& s : simulate_panel_batch(spec, first, count, c.threads)) {
      const auto sN = s.n >= 2 ? normalize_N_first(s) : undefined;
      const auto sn = s.copies >= 2 ? normalize_n_first(s) : undefined;
      for (std::size_t i = 0; i < c.grid.size(); ++i)
        os << s.replicate << ',' << format_double(c.grid[i].value()) << ','
           << format_double(s.values[i]) << ',' << format_double(sN[i]) << ','
           << format_double(sn[i]) << '\n';
    }
  }
  file.commit();
  log << "wrote " << path.string() << " (" << c.replicates * c.grid.size() << " rows)\n";
  return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& log) {
  const auto ids = suite_criteria(c.suite);
  fs::create_directories(c.out);

  VerifyOptions opt;
  opt.budget = c.budget;
  opt.seed = c.seed;
  opt.threads = c.threads;
  opt.on_result = [&](const CriterionResult& r) {
    log << (r.pass ? "PASS" : (r.gating ? "FAIL" : "SOFT-FAIL")) << " criterion " << r.id << ' '
        << r.title << " (" << fixed(r.seconds, 2) << " s)\n";
    for (const auto& ch : r.checks) print_check(log, ch);
    log.flush();
  };
  const auto results = run_suite(c.suite, opt);
  const bool pass = gating_pass(results);

  const fs::path csv_path = fs::path(c.out) / "verify_checks.csv";
  AtomicFile csv(csv_path);
  write_metadata(csv.stream(), c);
  csv.stream() << "criterion,gating,check,reference,estimate,band_lo,band_hi,ci_lo,ci_hi,pass\n";
  json criteria = json::array();
  for (const auto& r : results) {
    json checks = json::array();
    for (const auto& ch : r.checks) {
      std::string name = ch.name;
      std::replace(name.begin(), name.end(), ',', ';');
      csv.stream() << r.id << ',' << (r.gating ? 1 : 0) << ',' << name << ','
                   << format_double(ch.reference) << ',' << format_double(ch.estimate) << ','
                   << format_double(ch.band_lo) << ',' << format_double(ch.band_hi) << ','
                   << format_double(ch.ci_lo) << ',' << format_double(ch.ci_hi) << ','
                   << (ch.pass ? 1 : 0) << '\n';
      auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
      checks.push_back({{"name", ch.name},
                        {"reference", num(ch.reference)},
                        {"estimate", num(ch.estimate)},
                        {"band", {num(ch.band_lo), num(ch.band_hi)}},
                        {"ci", {num(ch.ci_lo), num(ch.ci_hi)}},
                        {"pass", ch.pass}});
    }
    criteria.push_back({{"id", r.id},
                        {"title", r.title},
                        {"gating", r.gating},
                        {"pass", r.pass},
                        {"seconds", r.seconds},
                        {"checks", checks}});
  }
  csv.commit();

  const json summary = {{"aggrlim_version", AGGRLIM_VERSION},
                        {"seed", c.seed},
                        {"config_hash", config_hash(c)},
                        {"config", canonical_config(c)},
                        {"suite", c.suite},
                        {"budget", std::string(to_string(c.budget))},
                        {"pass", pass},
                        {"criteria", criteria}};
  const fs::path json_path = fs::path(c.out) / "verify_summary.json";
  AtomicFile js(json_path);
  js.stream() << summary.dump(2) << '\n';
  js.commit();

  log << (pass ? "ALL GATING CRITERIA PASS" : "GATING CRITERIA FAILED") << '\n';
  log << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
  return pass ? 0 : 1;
}

int cmd_sweep(const RunConfig& c, std::ostream& log) {
  SweepConfig sc;
  sc.params = model_params(c);
  sc.mixing = c.mixing;
  sc.grid = c.grid;
  sc.fixed = c.sweep_regime == Regime::N_first ? c.copies : c.n;
  sc.swept = c.sweep_values;
  sc.replicates = c.replicates;
  sc.seed = c.seed;
  sc.blocks = c.blocks;
  sc.threads = c.threads;
  fs::create_directories(c.out);
  const auto rows = c.sweep_regime == Regime::N_first ? sweep_N_first(sc) : sweep_n_first(sc);

  const fs::path path = fs::path(c.out) / "sweep.csv";
  AtomicFile file(path);
  auto& os = file.stream();
  write_metadata(os, c);
  os << "regime,N,n,replicates,blocks,seed,i,j,t_i,t_j,estimate,lower,upper,plain,"
        "limit_reference,exact_reference\n";
  log << pad("regime", 8) << pad("N", 12) << pad("n", 12) << pad("max_dev_limit", 15)
      << pad("max_dev_exact", 15) << '\n';
  for (const auto& r : rows) {
    const auto g = static_cast<Eigen::Index>(r.grid.size());
    for (Eigen::Index i = 0; i < g; ++i)
      for (Eigen::Index j = 0; j < g; ++j)
        os << to_string(r.regime) << ',' << r.copies << ',' << r.n << ',' << r.replicates << ','
           << r.estimate.blocks << ',' << r.seed << ',' << i << ',' << j << ','
           << format_double(r.grid[i].value()) << ',' << format_double(r.grid[j].value()) << ','
           << format_double(r.estimate.estimate(i, j)) << ','
           << format_double(r.estimate.lower(i, j)) << ',' << format_double(r.estimate.upper(i, j))
           << ',' << format_double(r.estimate.plain(i, j)) << ','
           << format_double(r.limit_reference(i, j)) << ','
           << format_double(r.exact_reference(i, j)) << '\n';
    log << pad(std::string(to_string(r.regime)), 8) << pad(std::to_string(r.copies), 12)
        << pad(std::to_string(r.n), 12) << pad(fixed(r.max_rel_dev_limit, 4), 15)
        << pad(fixed(r.max_rel_dev_exact, 4), 15) << '\n';
  }
  file.commit();
  log << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_report(const RunConfig& c, std::ostream& log) {
  const fs::path dir = c.input.empty() ? fs::path(c.out) : fs::path(c.input);
  if (!fs::is_directory(dir)) throw ConfigError("report input " + dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".csv" &&
        !p.stem().string().ends_with("_plot"))
      files.push_back(p);
  }
  std::sort(files.begin(), files.end());

  const fs::path plot_dir = c.out_given ? fs::path(c.out) : dir;
  std::size_t recognized = 0;
  for (const auto& p : files) {
    const CsvTable t = read_csv(p);
    auto has = [&](const char* col) {
      return std::find(t.columns.begin(), t.columns.end(), col) != t.columns.end();
    };
    if (has("S_raw") || has("limit_reference")) fs::create_directories(plot_dir);
    if (has("S_raw")) {
      report_panel(t, plot_dir, log);
    } else if (has("limit_reference")) {
      report_sweep(t, plot_dir, log);
    } else if (has("band_lo")) {
      report_checks(t, log);
    } else {
      continue;
    }
    ++recognized;
  }
  if (recognized == 0) throw ConfigError("no aggrlim CSV outputs found in " + dir.string());
  return 0;
}

}  // namespace aggrlim::cli
