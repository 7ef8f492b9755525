#include "solpath/instances.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <vector>

#include "json.hpp"
#include "solpath/csv.hpp"
#include "solpath/mathkit/distributions.hpp"

namespace solpath {

GaussianLinearCcp make_instance(Vector mu, Matrix sigma, Vector c, double b, double alpha) {
  const auto d = mu.size();
  if (d < 1) throw Error(ErrorCode::ConfigError, "instance: dimension must be >= 1");
  if (sigma.rows() != d || sigma.cols() != d || c.size() != d) {
    throw Error(ErrorCode::ConfigError, "instance: inconsistent dimensions");
  }
  if (!mu.allFinite() || !sigma.allFinite() || !c.allFinite() || !std::isfinite(b)) {
    throw Error(ErrorCode::ConfigError, "instance: non-finite data");
  }
  if (c.squaredNorm() == 0.0) throw Error(ErrorCode::ConfigError, "instance: c must be nonzero");
  if (!(b > 0.0)) throw Error(ErrorCode::ConfigError, "instance: b must be positive");
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorCode::ConfigError, "instance: alpha must lie in (0, 0.5)");
  }
  GaussianLinearCcp inst;
  inst.d = static_cast<int>(d);
  inst.sigma_factor = cholesky_psd(sigma, RepairPolicy::Strict);
  inst.mu = std::move(mu);
  inst.sigma = std::move(sigma);
  inst.c = std::move(c);
  inst.b = b;
  inst.alpha = alpha;
  return inst;
}

GaussianLinearCcp generate_canonical_instance(int d, std::uint64_t seed, double alpha) {
  if (d < 1) throw Error(ErrorCode::OutOfRange, "generate_canonical_instance: d must be >= 1");
  RngStream rng(seed, 0);
  Vector mu(d);
  for (int i = 0; i < d; ++i) mu(i) = rng.uniform() - 0.5;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  }
  Matrix sigma = a * a.transpose() / static_cast<double>(d);
  sigma.diagonal().array() += 0.1;
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  Vector c(d);
  for (int i = 0; i < d; ++i) c(i) = -rng.uniform();
  if (c.norm() == 0.0) c(0) = -1.0;
  c /= c.norm();
  return make_instance(std::move(mu), std::move(sigma), std::move(c), 2.0, alpha);
}

SampleSet draw_samples(const GaussianLinearCcp& inst, int n, RngStream& rng) {
  if (n < 1) throw Error(ErrorCode::OutOfRange, "draw_samples: n must be >= 1");
  SampleSet out;
  out.data = sample_mvn(inst.mu, inst.sigma_factor, n, rng);
  out.provenance = "seed=" + std::to_string(rng.seed()) + ",stream=" + std::to_string(rng.index());
  return out;
}

DataSplit split_data(const SampleSet& samples, int n1, int n2) {
  const int n = samples.size();
  if (n1 < 1 || n2 < 1 || n1 + n2 != n) {
    throw Error(ErrorCode::SizeMismatch, "split_data: need n1 >= 1, n2 >= 1 and n1 + n2 = " +
                                             std::to_string(n) + ", got n1=" + std::to_string(n1) +
                                             " n2=" + std::to_string(n2));
  }
  DataSplit out;
  out.phase2 = samples.data.topRows(n2);
  out.phase1 = samples.data.bottomRows(n1);
  return out;
}

double true_satisfaction_probability(const GaussianLinearCcp& inst, const Vector& x) {
  require_same_size(x.size(), inst.d, "true_satisfaction_probability");
  const double spread = inst.sigma_factor.apply_transpose(x).norm();
  const double center = inst.mu.dot(x);
  if (spread > 0.0) return std_normal_cdf((inst.b - center) / spread);
  return center <= inst.b ? 1.0 : 0.0;
}

SampleSet read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, path + ": missing header");
  const auto header = csv::split(csv::strip_cr(line));
  const int d = static_cast<int>(header.size());
  if (d < 1 || header[0].empty()) throw Error(ErrorCode::ParseError, path + ": bad header");

  std::vector<double> values;
  int line_no = 1;
  int rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (static_cast<int>(cells.size()) != d) {
      throw Error(ErrorCode::RaggedRows, path + ": line " + std::to_string(line_no) + " has " +
                                             std::to_string(cells.size()) + " fields, expected " +
                                             std::to_string(d));
    }
    for (int j = 0; j < d; ++j) values.push_back(csv::parse_double(cells[j], line_no, j + 1));
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::EmptyInput, path + ": no data rows");
  SampleSet out;
  out.data = Eigen::Map<Matrix>(values.data(), rows, d);
  out.provenance = path;
  return out;
}

void write_samples(const SampleSet& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  for (int j = 0; j < samples.dim(); ++j) out << (j ? ",x" : "x") << (j + 1);
  out << '\n';
  for (int i = 0; i < samples.size(); ++i) {
    for (int j = 0; j < samples.dim(); ++j) out << (j ? "," : "") << csv::format_double(samples.data(i, j));
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

GaussianLinearCcp read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  static const std::set<std::string> known = {"d", "mu", "sigma", "c", "b", "alpha"};
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, path + ": expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw Error(ErrorCode::ConfigError, path + ": unknown key '" + key + "'");
  }
  try {
    const int d = doc.at("d").get<int>();
    if (d < 1) throw Error(ErrorCode::ConfigError, path + ": d must be >= 1");
    const auto mu = doc.at("mu").get<std::vector<double>>();
    const auto sigma = doc.at("sigma").get<std::vector<double>>();
    const auto c = doc.at("c").get<std::vector<double>>();
    if (static_cast<int>(mu.size()) != d || static_cast<int>(c.size()) != d ||
        static_cast<int>(sigma.size()) != d * d) {
      throw Error(ErrorCode::ConfigError, path + ": array lengths do not match d");
    }
    const double alpha = doc.value("alpha", 0.1);
    return make_instance(Eigen::Map<const Vector>(mu.data(), d),
                         Eigen::Map<const Matrix>(sigma.data(), d, d),
                         Eigen::Map<const Vector>(c.data(), d), doc.at("b").get<double>(), alpha);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
}

void write_instance(const GaussianLinearCcp& inst, const std::string& path) {
  nlohmann::json doc;
  doc["d"] = inst.d;
  doc["mu"] = std::vector<double>(inst.mu.data(), inst.mu.data() + inst.d);
  std::vector<double> sigma(inst.sigma.data(), inst.sigma.data() + inst.sigma.size());
  doc["sigma"] = sigma;
  doc["c"] = std::vector<double>(inst.c.data(), inst.c.data() + inst.d);
  doc["b"] = inst.b;
  doc["alpha"] = inst.alpha;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace solpath
