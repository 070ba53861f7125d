#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aggrlim/error.hpp"

#ifndef AGGRLIM_VERSION
#define AGGRLIM_VERSION "unknown"
#endif

namespace aggrlim::cli {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_metadata(std::ostream& os, const RunConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  os << "# aggrlim_version: " << AGGRLIM_VERSION << '\n';
  os << "# command: " << config.command << '\n';
  os << "# seed: " << config.seed << '\n';
  os << "# config_hash: " << config_hash(config) << '\n';
  os << "# config: " << canonical_config(config).dump() << '\n';
  for (const auto& [key, value] : extra) os << "# " << key << ": " << value << '\n';
}

AtomicFile::AtomicFile(fs::path target) : target_(std::move(target)) {
  temp_ = target_;
  temp_ += ".partial";
  os_ = std::make_unique<std::ofstream>(temp_, std::ios::binary | std::ios::trunc);
  if (!*os_) throw ConfigError("cannot write " + temp_.string());
}

AtomicFile::~AtomicFile() {
  if (!committed_) {
    os_.reset();
    std::error_code ec;
    fs::remove(temp_, ec);
  }
}

std::ostream& AtomicFile::stream() { return *os_; }

void AtomicFile::commit() {
  os_->flush();
  if (!*os_) throw RuntimeAbort("write failed for " + temp_.string());
  os_->close();
  fs::rename(temp_, target_);
  committed_ = true;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ConfigError(path.string() + ": missing column " + name);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  CsvTable t;
  t.path = path;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(": ");
      if (colon != std::string::npos && colon > 2) t.meta[line.substr(2, colon - 2)] = line.substr(colon + 2);
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split(line);
      continue;
    }
    auto row = split(line);
    if (row.size() != t.columns.size())
      throw ConfigError(path.string() + ": row has " + std::to_string(row.size()) + " cells, expected " +
                        std::to_string(t.columns.size()));
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ConfigError(path.string() + ": no header row");
  return t;
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw ConfigError("not a number: '" + text + "'");
  return v;
}

}  // namespace aggrlim::cli
