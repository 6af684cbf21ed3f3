#include <doctest.h>

#include "sparseopt/analysis.hpp"
#include "sparseopt/instances.hpp"
#include "sparseopt/objectives.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

using namespace sparseopt;

TEST_CASE("gaussian planted instance basics") {
  const auto inst = gaussian_planted(30, 50, 5, 0.0, 42);
  CHECK(inst.a.rows() == 30);
  CHECK(inst.a.cols() == 50);
  CHECK(inst.kind == "gaussian");
  CHECK(inst.initial_support.empty());

  for (int j = 0; j < 50; ++j)
    CHECK(inst.a.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));

  const auto supp = support_of(inst.x_star);
  CHECK(supp.size() == 5);
  for (int i : supp) CHECK(std::abs(inst.x_star[i]) == 1.0);

  // Noiseless: the planted vector fits the target exactly.
  const LeastSquaresObjective f(inst.a, inst.b);
  CHECK(f.value(inst.x_star) == 0.0);
}

TEST_CASE("gaussian planted instances are seed-deterministic") {
  const auto a = gaussian_planted(12, 20, 3, 0.5, 7);
  const auto b = gaussian_planted(12, 20, 3, 0.5, 7);
  const auto c = gaussian_planted(12, 20, 3, 0.5, 8);
  CHECK(a.a == b.a);
  CHECK(a.b == b.b);
  CHECK(a.x_star == b.x_star);
  CHECK(a.a != c.a);
}

TEST_CASE("noiseless planted support solves back to the planted vector") {
  const auto inst = gaussian_planted(100, 256, 8, 0.0, 3);
  const LeastSquaresObjective f(inst.a, inst.b);
  const auto res = f.restricted_minimize(support_of(inst.x_star), kInnerTol);
  CHECK((res.x - inst.x_star).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("gaussian planted rejects bad parameters") {
  CHECK_THROWS_AS(gaussian_planted(0, 5, 1, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_planted(5, 5, 6, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_planted(5, 5, 1, -0.1, 1), std::invalid_argument);
}

TEST_CASE("adversarial intervals partition the coordinates") {
  const auto iv = adversarial_intervals(2, 4);
  CHECK(iv.i1_begin == 0);
  CHECK(iv.i1_end == 2);
  CHECK(iv.i2_end == 10);
  CHECK(iv.n == 42);
}

TEST_CASE("adversarial instance closed-form values at s*=1, kappa=2") {
  const double delta = 0.01;
  const auto inst = ompr_adversarial(1, 2, delta);
  const auto iv = adversarial_intervals(1, 2);
  CHECK(iv.n == 7);
  CHECK(inst.a.rows() == 7);
  CHECK(inst.kind == "ompr-adversarial");

  const LeastSquaresObjective f(inst.a, inst.b);
  // f(x*) = s* kappa^2 (1 - delta)
  CHECK(f.value(inst.x_star) == doctest::Approx(3.96).epsilon(1e-12));

  // S0 is the first s* kappa^2 / 2 coordinates of I3.
  CHECK(inst.initial_support == SupportSet{3, 4});

  const auto start = f.restricted_minimize(inst.initial_support, kInnerTol);
  CHECK(f.value(start.x) == doctest::Approx(4.88).epsilon(1e-12));

  // On I2 the gradient at the starting point is -kappa sqrt(1 - 2 delta).
  const DenseVector g = f.gradient(start.x);
  const double expect = -2.0 * std::sqrt(1.0 - 2.0 * delta);
  for (int i = iv.i1_end; i < iv.i2_end; ++i)
    CHECK(g[i] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("adversarial construction validates its parameters") {
  CHECK_THROWS_AS(ompr_adversarial(1, 3, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(ompr_adversarial(1, 0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(ompr_adversarial(0, 2, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(ompr_adversarial(1, 2, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(ompr_adversarial(1, 2, 0.0), std::invalid_argument);
}

TEST_CASE("adversarial restricted condition number equals kappa") {
  const auto inst = ompr_adversarial(1, 2, 0.01);
  const LeastSquaresObjective f(inst.a, inst.b);
  for (int level = 2; level <= 3; ++level) {
    const auto c = brute_force_restricted_constants(f, level);
    CHECK(c.rho_plus == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.rho_minus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.kappa == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("instances survive a JSON round trip") {
  const auto inst = gaussian_planted(6, 9, 2, 0.3, 99);
  const auto back = instance_from_json(instance_to_json(inst));
  CHECK(back.a == inst.a);
  CHECK(back.b == inst.b);
  CHECK(back.x_star == inst.x_star);
  CHECK(back.s_star == inst.s_star);
  CHECK(back.noise_level == inst.noise_level);
  CHECK(back.seed == inst.seed);
  CHECK(back.kind == inst.kind);

  const auto adv = ompr_adversarial(2, 4, 1e-3);
  const auto adv_back = instance_from_json(instance_to_json(adv));
  CHECK(adv_back.a == adv.a);
  CHECK(adv_back.initial_support == adv.initial_support);

  const std::string path = "instance_roundtrip_tmp.json";
  save_instance(inst, path);
  const auto loaded = load_instance(path);
  CHECK(loaded.a == inst.a);
  CHECK(loaded.b == inst.b);
  std::remove(path.c_str());
}

TEST_CASE("malformed instance JSON is rejected") {
  CHECK_THROWS(instance_from_json("{\"kind\": \"gaussian\"}"));
  CHECK_THROWS(instance_from_json("not json at all"));
  CHECK_THROWS_AS(load_instance("no_such_file_anywhere.json"),
                  std::runtime_error);
}
