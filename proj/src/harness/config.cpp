#include "solpath/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace solpath {

void validate_config(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (c.instance_file.empty() && c.d < 1) fail("d must be >= 1");
  if (c.n1 < 1 || c.n2 < 1) fail("n1 and n2 must be >= 1");
  if (c.n1 + c.n2 != c.n) fail("n1 + n2 must equal n");
  if (!(c.alpha > 0.0 && c.alpha < 0.5)) fail("alpha must lie in (0, 0.5)");
  if (!(c.beta > 0.0 && c.beta < 0.5)) fail("beta must lie in (0, 0.5)");
  if (c.reps < 1) fail("reps must be >= 1");
  if (c.threads < 1) fail("threads must be >= 1");
  if (c.validators.empty()) fail("at least one validator is required");
  std::set<RuleKind> seen(c.validators.begin(), c.validators.end());
  if (seen.size() != c.validators.size()) fail("duplicate validator");
  const bool needs_mc = seen.count(RuleKind::UnnormalizedGS) || seen.count(RuleKind::NormalizedGS);
  if (needs_mc && c.mc_budget < 10000) fail("mc_budget must be >= 10000 for Gaussian-supremum rules");
  if (c.grid.p < 1) fail("grid_p must be >= 1");
  if (c.method() == Method::FAST && c.grid.p < 2) fail("FAST needs grid_p >= 2");
  if (!(c.grid.box > 0.0)) fail("box must be positive");
  if (c.grid.dro_df < 0) fail("dro_df must be >= 0");
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  static const std::set<std::string> known = {
      "d", "instance_seed", "instance_file", "method", "grid_p", "ro_pad", "dro_inflation", "dro_df",
      "box", "n", "n1", "n2", "alpha", "beta", "validators", "reps", "seed", "mc_budget", "threads", "out"};
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (doc.contains("method")) c.grid = default_grid(parse_method(doc["method"].get<std::string>()));
    c.d = doc.value("d", c.d);
    c.instance_seed = doc.value("instance_seed", c.instance_seed);
    c.instance_file = doc.value("instance_file", c.instance_file);
    c.grid.p = doc.value("grid_p", c.grid.p);
    c.grid.ro_pad = doc.value("ro_pad", c.grid.ro_pad);
    c.grid.dro_inflation = doc.value("dro_inflation", c.grid.dro_inflation);
    c.grid.dro_df = doc.value("dro_df", c.grid.dro_df);
    c.grid.box = doc.value("box", c.grid.box);
    c.n = doc.value("n", c.n);
    if (doc.contains("n1") || doc.contains("n2")) {
      c.n1 = doc.value("n1", c.n - doc.value("n2", c.n / 2));
      c.n2 = doc.value("n2", c.n - c.n1);
    } else {
      c.n2 = c.n / 2;
      c.n1 = c.n - c.n2;
    }
    c.alpha = doc.value("alpha", c.alpha);
    c.beta = doc.value("beta", c.beta);
    if (doc.contains("validators")) {
      c.validators.clear();
      for (const auto& name : doc["validators"]) c.validators.push_back(parse_rule(name.get<std::string>()));
    }
    c.reps = doc.value("reps", c.reps);
    c.seed = doc.value("seed", c.seed);
    c.mc_budget = doc.value("mc_budget", c.mc_budget);
    c.threads = doc.value("threads", c.threads);
    c.out_dir = doc.value("out", c.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad config value: ") + e.what());
  }
  validate_config(c);
  return c;
}

ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
  return config_from_json(doc);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json doc;
  if (c.instance_file.empty()) {
    doc["d"] = c.d;
    doc["instance_seed"] = c.instance_seed;
  } else {
    doc["instance_file"] = c.instance_file;
  }
  doc["method"] = to_string(c.method());
  doc["grid_p"] = c.grid.p;
  doc["ro_pad"] = c.grid.ro_pad;
  doc["dro_inflation"] = c.grid.dro_inflation;
  doc["dro_df"] = c.grid.dro_df;
  doc["box"] = c.grid.box;
  doc["n"] = c.n;
  doc["n1"] = c.n1;
  doc["n2"] = c.n2;
  doc["alpha"] = c.alpha;
  doc["beta"] = c.beta;
  auto& rules = doc["validators"] = nlohmann::json::array();
  for (RuleKind rule : c.validators) rules.push_back(to_string(rule));
  doc["reps"] = c.reps;
  doc["seed"] = c.seed;
  doc["mc_budget"] = c.mc_budget;
  return doc;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GaussianLinearCcp load_instance(const ExperimentConfig& config) {
  if (config.instance_file.empty()) return generate_canonical_instance(config.d, config.instance_seed, config.alpha);
  GaussianLinearCcp inst = read_instance(config.instance_file);
  inst.alpha = config.alpha;
  return inst;
}

}  // namespace solpath
