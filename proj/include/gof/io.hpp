#pragma once

#include "gof/statistics.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gof {

// Malformed input data, with the offending 1-based line when known.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line ? message + " (line " + std::to_string(line) + ")" : message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// One number per line; blank lines and '#' comments ignored. Parsing is
// locale-independent (std::from_chars).
std::vector<double> parse_sample_text(std::string_view text);
Sample read_sample_file(const std::string& path);

// Shortest round-trip representation.
std::string format_double(double v);

// Resolves a table path: as given if it exists, otherwise relative to
// $GOF_TABLE_DIR when set.
std::string resolve_table_path(const std::string& path);

// Directory for cached tables ($GOF_TABLE_DIR, or empty).
std::string table_cache_dir();

}  // namespace gof
