// Command line front end: run experiments, generate data, validate an
// external path, and re-aggregate saved records.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "solpath/harness/config.hpp"
#include "solpath/harness/experiment.hpp"
#include "solpath/instances.hpp"
#include "solpath/reformulations.hpp"
#include "solpath/validators.hpp"

using namespace solpath;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularCovariance:
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::RepairExceeded:
    case ErrorCode::AllDegenerate:
      return kNumericalError;
    default:
      return kConfigError;
  }
}

std::vector<RuleKind> parse_rule_list(const std::string& list) {
  std::vector<RuleKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_rule(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solution-path validation for data-driven chance-constrained optimization"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a replicated experiment");
  std::string config_path, method, validators, out_dir;
  int reps = 0, threads = 0, d = 0, n = 0, mc = 0;
  std::uint64_t seed = 0, instance_seed = 0;
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--method", method, "ro, dro, so or fast");
  run->add_option("--validators", validators, "comma list of unnorm_gs,norm_gs,univariate,plain");
  run->add_option("--reps", reps, "replications");
  auto* seed_opt = run->add_option("--seed", seed, "master seed");
  run->add_option("--threads", threads, "worker threads");
  run->add_option("--out", out_dir, "output directory for summary.json and records.csv");
  run->add_option("--d", d, "dimension of the canonical instance");
  auto* iseed_opt = run->add_option("--instance-seed", instance_seed, "seed of the canonical instance");
  run->add_option("--n", n, "total sample size (split evenly)");
  run->add_option("--mc", mc, "Monte Carlo draws for supremum quantiles");

  auto* gen = app.add_subcommand("gen-data", "Sample data from the canonical instance");
  int gen_d = 10, gen_n = 200;
  std::uint64_t gen_seed = 0, gen_instance_seed = 1;
  std::string gen_out, gen_instance_out;
  gen->add_option("--d", gen_d, "dimension")->required();
  gen->add_option("--n", gen_n, "number of samples")->required();
  gen->add_option("--seed", gen_seed, "sampling seed (stream 0, same as replication 0 of run)")->required();
  gen->add_option("--instance-seed", gen_instance_seed, "seed of the canonical instance");
  gen->add_option("--out", gen_out, "samples CSV")->required();
  gen->add_option("--instance-out", gen_instance_out, "also write the instance JSON");

  auto* val = app.add_subcommand("validate", "Select a candidate from a path CSV");
  std::string val_path, val_samples, val_rule = "univariate";
  double gamma = 0.9, beta = 0.05, b = 2.0;
  int val_mc = 200000;
  std::uint64_t val_seed = 0;
  val->add_option("--path", val_path, "candidate path CSV (s,status,objective,x_1..x_d)")->required();
  val->add_option("--samples", val_samples, "phase-two samples CSV")->required();
  val->add_option("--gamma", gamma, "target satisfaction level");
  val->add_option("--beta", beta, "1 - confidence");
  val->add_option("--rule", val_rule, "unnorm_gs, norm_gs, univariate or plain");
  val->add_option("--b", b, "right-hand side of xi'x <= b");
  val->add_option("--mc", val_mc, "Monte Carlo draws");
  val->add_option("--seed", val_seed, "Monte Carlo seed");

  auto* table = app.add_subcommand("table", "Summarize a records CSV");
  std::string records_path;
  table->add_option("--records", records_path, "records CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : read_config(config_path);
      if (!method.empty()) {
        const GridSpec defaults = default_grid(parse_method(method));
        if (config_path.empty() || config.method() != defaults.method) config.grid = defaults;
      }
      if (!validators.empty()) config.validators = parse_rule_list(validators);
      if (reps > 0) config.reps = reps;
      if (*seed_opt) config.seed = seed;
      if (threads > 0) config.threads = threads;
      if (!out_dir.empty()) config.out_dir = out_dir;
      if (d > 0) config.d = d;
      if (*iseed_opt) config.instance_seed = instance_seed;
      if (n > 0) {
        config.n = n;
        config.n2 = n / 2;
        config.n1 = n - config.n2;
      }
      if (mc > 0) config.mc_budget = mc;
      validate_config(config);
      const ExperimentResult result = run_experiment(config);
      std::cout << summary_json(result.summary, config).dump(2) << '\n';
    } else if (*gen) {
      const GaussianLinearCcp inst = generate_canonical_instance(gen_d, gen_instance_seed);
      RngStream rng(gen_seed, 0);
      write_samples(draw_samples(inst, gen_n, rng), gen_out);
      if (!gen_instance_out.empty()) write_instance(inst, gen_instance_out);
    } else if (*val) {
      const SolutionPath path = read_path(val_path);
      const SampleSet samples = read_samples(val_samples);
      const HMatrix hmatrix = evaluate_h_matrix(path, samples.data, b);
      RngStream rng(val_seed, 0);
      const ValidationReport report =
          select_candidate(path, hmatrix, gamma, MarginRule{parse_rule(val_rule), beta, val_mc}, rng);
      std::cout << to_json(report).dump(2) << '\n';
    } else if (*table) {
      std::cout << summary_json(summarize_records(records_path)).dump(2) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return 0;
}
