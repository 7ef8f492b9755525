#pragma once

#include <string>
#include <vector>

namespace solpath::csv {

std::string strip_cr(std::string line);
std::vector<std::string> split(const std::string& line);
// Throws ParseError naming the line and column. "nan" is accepted only when allow_nan.
double parse_double(const std::string& text, int line_no, int col, bool allow_nan = false);
long long parse_int(const std::string& text, int line_no, int col);
// %.17g, or "nan".
std::string format_double(double v);

}  // namespace solpath::csv
