#include "sparseopt/instances.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sparseopt {

PlantedInstance gaussian_planted(int m, int n, int s_star, double noise_level,
                                 std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("dimensions must be positive");
  if (s_star < 0 || s_star > n)
    throw std::invalid_argument("s_star must lie in [0, n]");
  if (noise_level < 0.0)
    throw std::invalid_argument("noise_level must be nonnegative");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  PlantedInstance inst;
  inst.a.resize(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) inst.a(i, j) = gauss(rng);
    const double norm = inst.a.col(j).norm();
    if (norm > 0) inst.a.col(j) /= norm;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(s_star);
  std::sort(order.begin(), order.end());

  std::uniform_int_distribution<int> coin(0, 1);
  inst.x_star = DenseVector::Zero(n);
  for (int i : order) inst.x_star[i] = coin(rng) ? 1.0 : -1.0;

  inst.b = inst.a * inst.x_star;
  if (noise_level > 0.0)
    for (int i = 0; i < m; ++i) inst.b[i] += noise_level * gauss(rng);

  inst.s_star = s_star;
  inst.noise_level = noise_level;
  inst.seed = seed;
  inst.kind = "gaussian";
  return inst;
}

AdversarialIntervals adversarial_intervals(int s_star, int kappa) {
  AdversarialIntervals iv;
  iv.i1_begin = 0;
  iv.i1_end = s_star;
  iv.i2_end = s_star * (1 + kappa);
  iv.n = s_star * (1 + kappa + kappa * kappa);
  return iv;
}

PlantedInstance ompr_adversarial(int s_star, int kappa, double delta) {
  if (s_star < 1) throw std::invalid_argument("s_star must be >= 1");
  if (kappa < 2 || kappa % 2 != 0)
    throw std::invalid_argument("kappa must be an even integer >= 2");
  if (!(delta > 0.0 && delta < 0.125))
    throw std::invalid_argument("delta must lie in (0, 1/8)");

  const auto iv = adversarial_intervals(s_star, kappa);
  const int n = iv.n;
  const double rk = std::sqrt(static_cast<double>(kappa));

  PlantedInstance inst;
  inst.a = DenseMatrix::Zero(n, n);
  inst.b = DenseVector::Zero(n);
  inst.x_star = DenseVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    double diag = 1.0, target = 1.0;
    if (i < iv.i1_end) {
      target = kappa * std::sqrt(1.0 - 4.0 * delta);
      // x* places the exact I1-restricted minimizer so that
      // f(x*) = s* kappa^2 (1 - delta) holds exactly.
      inst.x_star[i] = target;
    } else if (i < iv.i2_end) {
      diag = rk;
      target = rk * std::sqrt(1.0 - 2.0 * delta);
    }
    inst.a(i, i) = diag;
    inst.b[i] = target;
  }

  std::vector<int> s0;
  const int size = s_star * kappa * kappa / 2;
  for (int i = iv.i2_end; i < iv.i2_end + size; ++i) s0.push_back(i);
  inst.initial_support = SupportSet(std::move(s0));

  inst.s_star = s_star;
  inst.noise_level = (inst.b - inst.a * inst.x_star).norm();
  inst.seed = 0;
  inst.kind = "ompr-adversarial";
  return inst;
}

namespace {

nlohmann::json matrix_to_json(const DenseMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix matrix_from_json(const nlohmann::json& rows) {
  const int r = static_cast<int>(rows.size());
  if (r == 0) throw std::invalid_argument("empty matrix in instance file");
  const int c = static_cast<int>(rows[0].size());
  DenseMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument("ragged matrix in instance file");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

nlohmann::json vector_to_json(const DenseVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

DenseVector vector_from_json(const nlohmann::json& arr) {
  DenseVector v(arr.size());
  for (int i = 0; i < static_cast<int>(arr.size()); ++i)
    v[i] = arr[i].get<double>();
  return v;
}

}  // namespace

std::string instance_to_json(const PlantedInstance& inst) {
  nlohmann::json j;
  j["kind"] = inst.kind;
  j["m"] = inst.a.rows();
  j["n"] = inst.a.cols();
  j["A"] = matrix_to_json(inst.a);
  j["b"] = vector_to_json(inst.b);
  j["x_star"] = vector_to_json(inst.x_star);
  j["s_star"] = inst.s_star;
  j["noise_level"] = inst.noise_level;
  j["seed"] = inst.seed;
  j["initial_support"] = inst.initial_support.indices();
  return j.dump(2);
}

PlantedInstance instance_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  PlantedInstance inst;
  inst.kind = j.value("kind", "gaussian");
  inst.a = matrix_from_json(j.at("A"));
  inst.b = vector_from_json(j.at("b"));
  inst.x_star = vector_from_json(j.at("x_star"));
  inst.s_star = j.at("s_star").get<int>();
  inst.noise_level = j.at("noise_level").get<double>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("initial_support"))
    inst.initial_support =
        SupportSet(j.at("initial_support").get<std::vector<int>>());
  if (inst.a.rows() != inst.b.size() || inst.a.cols() != inst.x_star.size())
    throw std::invalid_argument("inconsistent dimensions in instance file");
  return inst;
}

void save_instance(const PlantedInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << instance_to_json(inst);
}

PlantedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

}  // namespace sparseopt
