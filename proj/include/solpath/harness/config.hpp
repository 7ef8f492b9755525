#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "solpath/instances.hpp"
#include "solpath/reformulations.hpp"
#include "solpath/validators.hpp"

namespace solpath {

struct ExperimentConfig {
  // Canonical generator (d, instance_seed) unless instance_file is set.
  int d = 10;
  std::uint64_t instance_seed = 1;
  std::string instance_file;

  GridSpec grid = default_grid(Method::RO);
  int n = 200;
  int n1 = 100;
  int n2 = 100;
  double alpha = 0.1;
  double beta = 0.05;
  std::vector<RuleKind> validators = all_rules();
  int reps = 1000;
  std::uint64_t seed = 0;
  int mc_budget = 200000;
  int threads = 1;
  std::string out_dir;

  Method method() const { return grid.method; }
};

// Throws ConfigError on any broken invariant.
void validate_config(const ExperimentConfig& config);

// JSON object with flat keys; unknown keys are rejected. Keys not present
// keep their defaults; when only n is given the split is n/2 each.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig read_config(const std::string& path);

// Every field that influences results (threads and out_dir excluded).
nlohmann::json config_to_json(const ExperimentConfig& config);
// FNV-1a of the compact config_to_json dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

GaussianLinearCcp load_instance(const ExperimentConfig& config);

}  // namespace solpath
