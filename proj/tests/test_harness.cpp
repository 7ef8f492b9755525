#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "solpath/error.hpp"
#include "solpath/harness/config.hpp"
#include "solpath/harness/experiment.hpp"

using namespace solpath;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(Method m = Method::RO, int reps = 6) {
  ExperimentConfig cfg;
  cfg.d = 4;
  cfg.grid = default_grid(m);
  cfg.grid.p = m == Method::FAST ? 11 : 12;
  cfg.n = 80;
  cfg.n1 = 40;
  cfg.n2 = 40;
  cfg.reps = reps;
  cfg.seed = 21;
  cfg.mc_budget = 10000;
  return cfg;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("solpath_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(SOLPATH_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_CASE("run_replication is deterministic") {
  for (Method m : {Method::RO, Method::MomentDRO, Method::SO, Method::FAST}) {
    const auto cfg = small_config(m);
    const auto a = run_replication(cfg, 3);
    const auto b = run_replication(cfg, 3);
    REQUIRE(a.rules.size() == b.rules.size());
    CHECK(same(a.benchmark_obj, b.benchmark_obj));
    CHECK(a.benchmark_feasible == b.benchmark_feasible);
    for (std::size_t k = 0; k < a.rules.size(); ++k) {
      CHECK(same(a.rules[k].s_star, b.rules[k].s_star));
      CHECK(same(a.rules[k].objective, b.rules[k].objective));
      CHECK(a.rules[k].feasible == b.rules[k].feasible);
    }
    const auto other = run_replication(cfg, 4);
    CHECK(other.rep == 4);
  }
}

TEST_CASE("aggregate of a single replication") {
  const auto cfg = small_config();
  const auto rec = run_replication(cfg, 0);
  const auto table = aggregate({rec});
  CHECK(table.reps == 1);
  REQUIRE(table.rules.size() == rec.rules.size());
  for (std::size_t k = 0; k < rec.rules.size(); ++k) {
    const auto& o = rec.rules[k];
    const auto& s = table.rules[k];
    CHECK(s.rule == to_string(o.rule));
    CHECK(s.selected == (o.none_feasible ? 0 : 1));
    CHECK(s.feasible == (o.feasible ? 1 : 0));
    CHECK(s.feasibility_level == (o.feasible ? 1.0 : 0.0));
    CHECK(same(s.mean_objective, o.objective));
  }
  CHECK(same(table.benchmark_mean_objective, rec.benchmark_obj));
}

TEST_CASE("summary matches record means and round-trips through CSV") {
  auto cfg = small_config(Method::RO, 10);
  const auto dir = scratch("roundtrip");
  cfg.out_dir = dir.string();
  const auto result = run_experiment(cfg);
  REQUIRE(fs::exists(dir / "records.csv"));
  REQUIRE(fs::exists(dir / "summary.json"));

  for (std::size_t k = 0; k < cfg.validators.size(); ++k) {
    double sum = 0.0;
    int sel = 0, feas = 0;
    for (const auto& rec : result.records) {
      const auto& o = rec.rules[k];
      if (!o.none_feasible) {
        sum += o.objective;
        ++sel;
      }
      feas += o.feasible ? 1 : 0;
    }
    const auto& s = result.summary.rules[k];
    CHECK(s.selected == sel);
    if (sel > 0) CHECK(std::abs(s.mean_objective - sum / sel) <= 1e-12);
    CHECK(std::abs(s.feasibility_level - static_cast<double>(feas) / cfg.reps) <= 1e-12);
  }
  CHECK(summarize_records((dir / "records.csv").string()) == result.summary);
  const auto back = read_records((dir / "records.csv").string());
  CHECK(records_csv(back) == records_csv(result.records));
  fs::remove_all(dir);
}

TEST_CASE("thread count does not change outputs") {
  auto cfg = small_config(Method::RO, 12);
  std::string summary_ref, records_ref;
  for (int threads : {1, 8}) {
    const auto dir = scratch("threads" + std::to_string(threads));
    cfg.threads = threads;
    cfg.out_dir = dir.string();
    run_experiment(cfg);
    const auto summary = slurp(dir / "summary.json");
    const auto records = slurp(dir / "records.csv");
    if (threads == 1) {
      summary_ref = summary;
      records_ref = records;
    } else {
      CHECK(summary == summary_ref);
      CHECK(records == records_ref);
    }
    fs::remove_all(dir);
  }
}

TEST_CASE("records reader guards and none-feasible accounting") {
  const auto dir = scratch("records");
  const auto empty = dir / "empty.csv";
  {
    std::ofstream out(empty);
    out << "rep,rule,s_star,objective,true_prob,feasible,none_feasible,benchmark_obj,benchmark_feasible\n";
  }
  try {
    summarize_records(empty.string());
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }

  const auto two = dir / "two.csv";
  {
    std::ofstream out(two);
    out << "rep,rule,s_star,objective,true_prob,feasible,none_feasible,benchmark_obj,benchmark_feasible\n"
        << "0,univariate,3,-2.5,0.95,1,0,-3,1\n"
        << "1,univariate,nan,nan,nan,0,1,-3,1\n";
  }
  const auto table = summarize_records(two.string());
  REQUIRE(table.rules.size() == 1);
  CHECK(table.reps == 2);
  CHECK(table.rules[0].none_feasible == 1);
  CHECK(table.rules[0].feasibility_level == 0.5);
  CHECK(table.rules[0].mean_objective == -2.5);

  const auto bad = dir / "bad.csv";
  {
    std::ofstream out(bad);
    out << "rep,rule,s_star\n0,univariate,1\n";
  }
  CHECK_THROWS_AS(summarize_records(bad.string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("config parsing") {
  const auto cfg = config_from_json(nlohmann::json{{"method", "fast"}, {"n", 60}, {"reps", 3}, {"validators", {"univariate", "plain"}}});
  CHECK(cfg.method() == Method::FAST);
  CHECK(cfg.grid.p == 11);
  CHECK(cfg.n1 == 30);
  CHECK(cfg.n2 == 30);
  CHECK(cfg.validators.size() == 2);

  try {
    config_from_json(nlohmann::json{{"reps", 3}, {"colour", "blue"}});
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"n", 10}, {"n1", 3}, {"n2", 3}}), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"mc_budget", 100}}), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"beta", 0.7}}), Error);

  auto a = small_config();
  auto b = a;
  b.threads = 8;
  b.out_dir = "/tmp/elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 22;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("benchmark pairing") {
  CHECK(benchmark_name(Method::RO) == "sca");
  CHECK(benchmark_name(Method::MomentDRO) == "dro_chi2");
  CHECK(benchmark_name(Method::SO) == "so_full");
  CHECK(benchmark_name(Method::FAST) == "fast");
}

TEST_CASE("command line tool") {
  const auto dir = scratch("cli");
  const auto log = dir / "log.txt";

  {
    std::ofstream bad(dir / "bad.json");
    bad << R"({"reps": 2, "unknown_key": 1})";
  }
  CHECK(run_cli("run --config " + (dir / "bad.json").string(), log) == 2);
  CHECK(run_cli("run --method nonsense", log) == 2);
  CHECK(run_cli("frobnicate", log) == 2);

  {
    std::ofstream good(dir / "good.json");
    good << R"({"d": 4, "n": 60, "reps": 3, "mc_budget": 10000, "grid_p": 8})";
  }
  CHECK(run_cli("run --config " + (dir / "good.json").string() + " --out " + (dir / "out").string(), log) == 0);
  const auto summary = nlohmann::json::parse(slurp(log));
  CHECK(summary.at("reps") == 3);
  CHECK(fs::exists(dir / "out" / "records.csv"));

  CHECK(run_cli("table --records " + (dir / "out" / "records.csv").string(), log) == 0);
  CHECK(nlohmann::json::parse(slurp(log)).at("reps") == 3);

  CHECK(run_cli("gen-data --d 3 --n 40 --seed 5 --out " + (dir / "samples.csv").string(), log) == 0);
  CHECK(slurp(dir / "samples.csv").rfind("x1,x2,x3\n", 0) == 0);

  {
    std::ofstream path(dir / "path.csv");
    path << "s,status,objective,x_1,x_2,x_3\n"
         << "1,Optimal,0,0,0,0\n"
         << "2,Optimal,-0.1,0.1,0,0\n"
         << "3,Excluded,nan,nan,nan,nan\n";
  }
  CHECK(run_cli("validate --path " + (dir / "path.csv").string() + " --samples " + (dir / "samples.csv").string() +
                    " --rule univariate --gamma 0.9",
                log) == 0);
  const auto report = nlohmann::json::parse(slurp(log));
  CHECK(report.at("rule") == "univariate");
  CHECK(report.at("excluded") == 1);
  CHECK(!report.at("selected").is_null());

  CHECK(run_cli("validate --path " + (dir / "missing.csv").string() + " --samples " + (dir / "samples.csv").string(), log) == 2);
  fs::remove_all(dir);
}
