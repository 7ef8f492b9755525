#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "solpath/csv.hpp"
#include "solpath/harness/experiment.hpp"

namespace solpath {
namespace {

constexpr const char* kHeader =
    "rep,rule,s_star,objective,true_prob,feasible,none_feasible,benchmark_obj,benchmark_feasible";

bool parse_flag(const std::string& text, int line_no, int col) {
  const long long v = csv::parse_int(text, line_no, col);
  if (v != 0 && v != 1) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", column " +
                                           std::to_string(col) + ": expected 0 or 1");
  }
  return v == 1;
}

}  // namespace

std::string records_csv(const std::vector<ReplicationRecord>& records) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const auto& record : records) {
    for (const auto& o : record.rules) {
      out << record.rep << ',' << to_string(o.rule) << ',' << csv::format_double(o.s_star) << ','
          << csv::format_double(o.objective) << ',' << csv::format_double(o.true_prob) << ','
          << (o.feasible ? 1 : 0) << ',' << (o.none_feasible ? 1 : 0) << ','
          << csv::format_double(record.benchmark_obj) << ',' << (record.benchmark_feasible ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

void write_records(const std::vector<ReplicationRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << records_csv(records);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::vector<ReplicationRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || csv::strip_cr(line) != kHeader) {
    throw Error(ErrorCode::ParseError, path + ": expected header " + std::string(kHeader));
  }
  std::vector<ReplicationRecord> records;
  std::map<int, std::size_t> position;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != 9) throw Error(ErrorCode::RaggedRows, path + ": line " + std::to_string(line_no));
    const int rep = static_cast<int>(csv::parse_int(cells[0], line_no, 1));
    auto [it, inserted] = position.emplace(rep, records.size());
    if (inserted) {
      ReplicationRecord record;
      record.rep = rep;
      record.benchmark_obj = csv::parse_double(cells[7], line_no, 8, true);
      record.benchmark_feasible = parse_flag(cells[8], line_no, 9);
      records.push_back(std::move(record));
    }
    RuleOutcome o;
    try {
      o.rule = parse_rule(cells[1]);
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, path + ": line " + std::to_string(line_no) + ": unknown rule");
    }
    o.s_star = csv::parse_double(cells[2], line_no, 3, true);
    o.objective = csv::parse_double(cells[3], line_no, 4, true);
    o.true_prob = csv::parse_double(cells[4], line_no, 5, true);
    o.feasible = parse_flag(cells[5], line_no, 6);
    o.none_feasible = parse_flag(cells[6], line_no, 7);
    records[it->second].rules.push_back(std::move(o));
  }
  if (records.empty()) throw Error(ErrorCode::EmptyInput, path + ": no records");
  return records;
}

SummaryTable summarize_records(const std::string& path) { return aggregate(read_records(path)); }

}  // namespace solpath
