#include "solpath/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "solpath/error.hpp"

namespace solpath::csv {
namespace {

[[noreturn]] void fail(const std::string& text, int line_no, int col) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", column " +
                                         std::to_string(col) + ": cannot parse '" + text + "'");
}

std::pair<const char*, const char*> trimmed(const std::string& text) {
  const std::size_t a = text.find_first_not_of(" \t");
  if (a == std::string::npos) return {nullptr, nullptr};
  const std::size_t b = text.find_last_not_of(" \t");
  return {text.data() + a, text.data() + b + 1};
}

}  // namespace

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, int line_no, int col, bool allow_nan) {
  auto [first, last] = trimmed(text);
  if (!first) fail(text, line_no, col);
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(text, line_no, col);
  if (std::isnan(value) && allow_nan) return value;
  if (!std::isfinite(value)) fail(text, line_no, col);
  return value;
}

long long parse_int(const std::string& text, int line_no, int col) {
  auto [first, last] = trimmed(text);
  if (!first) fail(text, line_no, col);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(text, line_no, col);
  return value;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace solpath::csv
