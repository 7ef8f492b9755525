#include "solpath/harness/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "solpath/mathkit/distributions.hpp"
#include "solpath/solvers/line_search.hpp"

namespace solpath {
namespace {

const double kNaN = std::nan("");

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

// Stream offset for each rule's Monte Carlo draws; keyed by rule kind so the
// draws do not depend on which other rules are configured.
std::uint64_t mc_stream(RuleKind rule) { return 1 + static_cast<std::uint64_t>(rule); }

}  // namespace

bool SummaryTable::operator==(const SummaryTable& other) const {
  if (reps != other.reps || rules.size() != other.rules.size() || benchmark_count != other.benchmark_count ||
      !same_double(benchmark_mean_objective, other.benchmark_mean_objective) ||
      !same_double(benchmark_feasibility_level, other.benchmark_feasibility_level)) {
    return false;
  }
  for (std::size_t k = 0; k < rules.size(); ++k) {
    const auto& a = rules[k];
    const auto& b = other.rules[k];
    if (a.rule != b.rule || a.selected != b.selected || a.none_feasible != b.none_feasible ||
        a.feasible != b.feasible || !same_double(a.mean_objective, b.mean_objective) ||
        !same_double(a.feasibility_level, b.feasibility_level)) {
      return false;
    }
  }
  return true;
}

std::string benchmark_name(Method method) {
  switch (method) {
    case Method::RO: return "sca";
    case Method::MomentDRO: return "dro_chi2";
    case Method::SO: return "so_full";
    case Method::FAST: return "fast";
  }
  return "unknown";
}

Candidate benchmark_solution(const ExperimentConfig& config, const GaussianLinearCcp& inst,
                             const SampleSet& samples, const DataSplit& split) {
  switch (config.method()) {
    case Method::RO: return solve_sca_benchmark(inst);
    case Method::MomentDRO: {
      const PhaseOneStats stats = phase_one_stats(samples.data);
      const int df = config.grid.dro_df > 0 ? config.grid.dro_df : inst.d;
      const double s = chi_square_quantile(df, 1.0 - config.beta);
      return solve_dro_point(stats, s, config.alpha, inst.c, inst.b);
    }
    case Method::SO:
      return solve_so_point(samples.data, samples.size(), inst.c, inst.b, config.grid.box);
    case Method::FAST: {
      const Candidate hat = solve_so_point(split.phase1, static_cast<int>(split.phase1.rows()), inst.c,
                                           inst.b, config.grid.box);
      if (hat.status != CandidateStatus::Optimal) return hat;
      const auto line = line_search_fast(inst.c, Vector::Zero(inst.d), hat.x, split.phase2, inst.b);
      Candidate out;
      out.s = line.step;
      out.x = line.x;
      out.status = CandidateStatus::Optimal;
      out.objective = inst.c.dot(line.x);
      return out;
    }
  }
  throw Error(ErrorCode::ConfigError, "unknown method");
}

ReplicationRecord run_replication(const ExperimentConfig& config, const GaussianLinearCcp& inst, int rep) {
  ReplicationRecord record;
  record.rep = rep;
  record.benchmark_obj = kNaN;
  for (RuleKind rule : config.validators) {
    RuleOutcome outcome;
    outcome.rule = rule;
    outcome.s_star = outcome.objective = outcome.true_prob = kNaN;
    outcome.none_feasible = true;
    record.rules.push_back(std::move(outcome));
  }

  RngStream rng(config.seed, static_cast<std::uint64_t>(rep));
  try {
    const SampleSet samples = draw_samples(inst, config.n, rng);
    const DataSplit split = split_data(samples, config.n1, config.n2);

    try {
      const Candidate bench = benchmark_solution(config, inst, samples, split);
      if (bench.status == CandidateStatus::Optimal) {
        record.benchmark_obj = bench.objective;
        record.benchmark_feasible = true_satisfaction_probability(inst, bench.x) >= inst.gamma();
      } else {
        record.benchmark_error = bench.reason;
      }
    } catch (const Error& e) {
      record.benchmark_error = e.what();
    }

    const SolutionPath path = build_path(config.grid, split.phase1, inst.c, inst.b, config.alpha, config.beta);
    for (const auto& cand : path.candidates) {
      record.path_objectives.push_back(cand.status == CandidateStatus::Optimal ? cand.objective : kNaN);
    }
    const HMatrix hmatrix = evaluate_h_matrix(path, split.phase2, inst.b);
    for (auto& outcome : record.rules) {
      RngStream mc = rng.substream(mc_stream(outcome.rule));
      ValidationReport report = select_candidate(
          path, hmatrix, inst.gamma(), MarginRule{outcome.rule, config.beta, config.mc_budget}, mc);
      if (report.selected) {
        const Candidate& chosen = path.candidates[static_cast<std::size_t>(*report.selected)];
        outcome.none_feasible = false;
        outcome.s_star = chosen.s;
        outcome.objective = chosen.objective;
        outcome.true_prob = true_satisfaction_probability(inst, chosen.x);
        outcome.feasible = outcome.true_prob >= inst.gamma();
      }
      outcome.report = std::move(report);
    }
  } catch (const Error& e) {
    for (auto& outcome : record.rules) {
      if (!outcome.report) outcome.error = e.what();
    }
  }
  return record;
}

ReplicationRecord run_replication(const ExperimentConfig& config, int rep) {
  validate_config(config);
  return run_replication(config, load_instance(config), rep);
}

SummaryTable aggregate(const std::vector<ReplicationRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "aggregate: no records");
  SummaryTable table;
  table.reps = static_cast<int>(records.size());
  for (const auto& outcome : records.front().rules) table.rules.push_back(RuleSummary{to_string(outcome.rule)});
  std::vector<double> sums(table.rules.size(), 0.0);
  double bench_sum = 0.0;
  int bench_feasible = 0;
  for (const auto& record : records) {
    if (record.rules.size() != table.rules.size()) {
      throw Error(ErrorCode::SizeMismatch, "aggregate: replications list different rules");
    }
    for (std::size_t k = 0; k < record.rules.size(); ++k) {
      const auto& outcome = record.rules[k];
      auto& summary = table.rules[k];
      if (summary.rule != to_string(outcome.rule)) {
        throw Error(ErrorCode::SizeMismatch, "aggregate: rule order differs between replications");
      }
      if (outcome.none_feasible) {
        ++summary.none_feasible;
      } else {
        ++summary.selected;
        sums[k] += outcome.objective;
      }
      if (outcome.feasible) ++summary.feasible;
    }
    if (!std::isnan(record.benchmark_obj)) {
      ++table.benchmark_count;
      bench_sum += record.benchmark_obj;
    }
    if (record.benchmark_feasible) ++bench_feasible;
  }
  const double reps = static_cast<double>(table.reps);
  for (std::size_t k = 0; k < table.rules.size(); ++k) {
    auto& summary = table.rules[k];
    summary.mean_objective = summary.selected ? sums[k] / summary.selected : kNaN;
    summary.feasibility_level = summary.feasible / reps;
  }
  table.benchmark_mean_objective = table.benchmark_count ? bench_sum / table.benchmark_count : kNaN;
  table.benchmark_feasibility_level = bench_feasible / reps;
  return table;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const GaussianLinearCcp inst = load_instance(config);
  ExperimentResult result;
  result.records.resize(static_cast<std::size_t>(config.reps));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int rep = next++; rep < config.reps; rep = next++) {
      result.records[static_cast<std::size_t>(rep)] = run_replication(config, inst, rep);
    }
  };
  const int threads = std::min(config.threads, config.reps);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  result.summary = aggregate(result.records);

  if (!config.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + config.out_dir + ": " + ec.message());
    const auto dir = std::filesystem::path(config.out_dir);
    write_records(result.records, (dir / "records.csv").string());
    std::ofstream out(dir / "summary.json");
    if (!out) throw Error(ErrorCode::IoError, "cannot write summary.json in " + config.out_dir);
    out << summary_json(result.summary, config).dump(2) << '\n';
  }
  return result;
}

nlohmann::json summary_json(const SummaryTable& table) {
  nlohmann::json doc;
  doc["reps"] = table.reps;
  auto& rules = doc["rules"] = nlohmann::json::array();
  for (const auto& rule : table.rules) {
    rules.push_back({{"rule", rule.rule},
                     {"mean_objective", rule.mean_objective},
                     {"feasibility_level", rule.feasibility_level},
                     {"selected", rule.selected},
                     {"feasible", rule.feasible},
                     {"none_feasible", rule.none_feasible}});
  }
  doc["benchmark"] = {{"mean_objective", table.benchmark_mean_objective},
                      {"feasibility_level", table.benchmark_feasibility_level},
                      {"count", table.benchmark_count}};
  return doc;
}

nlohmann::json summary_json(const SummaryTable& table, const ExperimentConfig& config) {
  nlohmann::json doc = summary_json(table);
  doc["method"] = to_string(config.method());
  doc["benchmark"]["name"] = benchmark_name(config.method());
  for (auto& rule : doc["rules"]) rule["beta"] = config.beta;
  doc["config"] = config_to_json(config);
  doc["config_hash"] = config_hash(config);
  return doc;
}

}  // namespace solpath
