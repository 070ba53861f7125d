#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace aggrlim::cli {

// 17 significant digits, '.' decimal point; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

// Comment lines "# key: value" carrying version, command, seed, config hash
// and the canonical config, followed by `extra` in order.
void write_metadata(std::ostream& os, const RunConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& extra = {});

// Writes through a temporary file that is renamed into place on commit(), so
// an aborted run never leaves a truncated output behind.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path target);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream();
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::unique_ptr<std::ofstream> os_;
  bool committed_ = false;
};

struct CsvTable {
  std::filesystem::path path;
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Index of `name` in columns; throws ConfigError when absent.
  std::size_t column(const std::string& name) const;
};

// Throws ConfigError on unreadable files, a missing header or ragged rows.
CsvTable read_csv(const std::filesystem::path& path);
double parse_double(const std::string& text);

}  // namespace aggrlim::cli
