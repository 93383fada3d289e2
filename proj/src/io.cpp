#include "gof/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gof {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<double> parse_sample_text(std::string_view text) {
  std::vector<double> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    // from_chars rejects a leading '+'; accept it as the C locale does.
    std::string_view body = line.front() == '+' ? line.substr(1) : line;
    double v = 0.0;
    const auto res = std::from_chars(body.data(), body.data() + body.size(), v);
    if (res.ec != std::errc() || res.ptr != body.data() + body.size())
      throw DataError("cannot parse '" + std::string(line) + "' as a number", line_no);
    if (!std::isfinite(v)) throw DataError("non-finite value '" + std::string(line) + "'", line_no);
    out.push_back(v);
  }
  return out;
}

Sample read_sample_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto values = parse_sample_text(ss.str());
  if (values.empty()) throw DataError("input file '" + path + "' contains no data");
  return Sample(std::move(values));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string table_cache_dir() {
  const char* dir = std::getenv("GOF_TABLE_DIR");
  return dir ? std::string(dir) : std::string();
}

std::string resolve_table_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  const std::string dir = table_cache_dir();
  if (!dir.empty() && fs::path(path).is_relative()) {
    const fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

}  // namespace gof
