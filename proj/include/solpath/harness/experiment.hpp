#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "solpath/harness/config.hpp"
#include "solpath/instances.hpp"
#include "solpath/reformulations.hpp"
#include "solpath/validators.hpp"

namespace solpath {

struct RuleOutcome {
  RuleKind rule = RuleKind::Univariate;
  double s_star = 0.0;      // nan when nothing was selected
  double objective = 0.0;   // nan when nothing was selected
  double true_prob = 0.0;   // nan when nothing was selected
  bool feasible = false;
  // Nothing selected, either because no candidate passed or because the
  // replication failed upstream (see error).
  bool none_feasible = false;
  std::string error;
  // Kept in memory only; not part of the records file.
  std::optional<ValidationReport> report;
};

struct ReplicationRecord {
  int rep = 0;
  std::vector<RuleOutcome> rules;
  double benchmark_obj = 0.0;  // nan on benchmark failure
  bool benchmark_feasible = false;
  std::string benchmark_error;
  // Objectives along the path, ascending s (nan for excluded candidates).
  std::vector<double> path_objectives;
};

struct RuleSummary {
  std::string rule;
  int selected = 0;
  int none_feasible = 0;
  int feasible = 0;
  double mean_objective = 0.0;  // over replications that selected; nan if none did
  double feasibility_level = 0.0;

  bool operator==(const RuleSummary&) const = default;
};

struct SummaryTable {
  int reps = 0;
  std::vector<RuleSummary> rules;
  int benchmark_count = 0;  // replications with a benchmark solution
  double benchmark_mean_objective = 0.0;
  double benchmark_feasibility_level = 0.0;

  bool operator==(const SummaryTable& other) const;
};

// Draws the replication's data from stream (seed, rep), builds the path
// from phase one, validates on phase two and scores against the oracle.
ReplicationRecord run_replication(const ExperimentConfig& config, const GaussianLinearCcp& inst, int rep);
ReplicationRecord run_replication(const ExperimentConfig& config, int rep);

// Benchmark solution for the method: SCA for RO, chi-square DRO for
// MomentDRO, all-n scenario program for SO, two-stage FAST for FAST.
Candidate benchmark_solution(const ExperimentConfig& config, const GaussianLinearCcp& inst,
                             const SampleSet& samples, const DataSplit& split);
std::string benchmark_name(Method method);

struct ExperimentResult {
  SummaryTable summary;
  std::vector<ReplicationRecord> records;
};

// Runs config.reps replications on config.threads threads. Aggregation
// follows replication order, so results do not depend on the thread count.
// Writes summary.json and records.csv into config.out_dir when set.
ExperimentResult run_experiment(const ExperimentConfig& config);

SummaryTable aggregate(const std::vector<ReplicationRecord>& records);

// Records CSV: rep,rule,s_star,objective,true_prob,feasible,none_feasible,benchmark_obj,benchmark_feasible
std::string records_csv(const std::vector<ReplicationRecord>& records);
void write_records(const std::vector<ReplicationRecord>& records, const std::string& path);
std::vector<ReplicationRecord> read_records(const std::string& path);
SummaryTable summarize_records(const std::string& path);

nlohmann::json summary_json(const SummaryTable& table);
// summary_json plus the config block and its hash.
nlohmann::json summary_json(const SummaryTable& table, const ExperimentConfig& config);

}  // namespace solpath
