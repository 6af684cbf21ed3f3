#include <doctest.h>

#include "sparseopt/analysis.hpp"
#include "sparseopt/instances.hpp"
#include "sparseopt/objectives.hpp"
#include "sparseopt/solvers.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace sparseopt;

namespace {

DenseMatrix randn_matrix(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  DenseMatrix a(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = gauss(rng);
  return a;
}

DenseVector randn_vector(int m, std::uint64_t seed) {
  return randn_matrix(m, 1, seed).col(0);
}

LeastSquaresObjective diagonal_objective(std::initializer_list<double> diag) {
  const int n = static_cast<int>(diag.size());
  DenseMatrix a = DenseMatrix::Zero(n, n);
  int i = 0;
  for (double d : diag) a(i, i) = d, ++i;
  return LeastSquaresObjective(a, DenseVector::Zero(n));
}

}  // namespace

TEST_CASE("restricted constants of a diagonal design") {
  const auto f = diagonal_objective({1.0, 2.0, 3.0});
  for (int level = 1; level <= 3; ++level) {
    const auto c = brute_force_restricted_constants(f, level);
    CHECK(c.level == level);
    CHECK(c.method == "brute_force");
    CHECK(c.rho_plus == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(c.rho_minus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.kappa == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(c.delta == doctest::Approx(0.8).epsilon(1e-12));
    if (level >= 2) {
      CHECK(c.rho2_plus == doctest::Approx(9.0).epsilon(1e-12));
      CHECK(c.kappa_tilde == doctest::Approx(9.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("orthonormal designs have kappa = 1 and delta = 0") {
  const LeastSquaresObjective f(DenseMatrix::Identity(5, 5),
                                DenseVector::Zero(5));
  for (int level : {1, 3, 5}) {
    const auto c = brute_force_restricted_constants(f, level);
    CHECK(c.rho_plus == doctest::Approx(1.0));
    CHECK(c.rho_minus == doctest::Approx(1.0));
    CHECK(c.kappa == doctest::Approx(1.0));
    CHECK(c.delta == doctest::Approx(0.0));
  }
}

TEST_CASE("level-2 constants match an independent pair enumeration") {
  const DenseMatrix a = randn_matrix(8, 6, 11);
  const LeastSquaresObjective f(a, randn_vector(8, 12));
  const auto c = brute_force_restricted_constants(f, 2);

  const DenseMatrix gram = a.transpose() * a;
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      DenseMatrix sub(2, 2);
      sub << gram(i, i), gram(i, j), gram(j, i), gram(j, j);
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(sub);
      hi = std::max(hi, es.eigenvalues().maxCoeff());
      lo = std::min(lo, es.eigenvalues().minCoeff());
    }
  }
  CHECK(c.rho_plus == doctest::Approx(hi).epsilon(1e-10));
  CHECK(c.rho_minus == doctest::Approx(lo).epsilon(1e-10));
  CHECK(c.rho2_plus == doctest::Approx(hi).epsilon(1e-10));
  CHECK(pairwise_rho2_plus(a) == doctest::Approx(hi).epsilon(1e-10));
}

TEST_CASE("constants refuse out-of-range or oversized levels") {
  const LeastSquaresObjective f(DenseMatrix::Identity(4, 4),
                                DenseVector::Zero(4));
  CHECK_THROWS_AS(brute_force_restricted_constants(f, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_force_restricted_constants(f, 5),
                  std::invalid_argument);

  const LeastSquaresObjective wide(randn_matrix(5, 50, 13),
                                   DenseVector::Zero(5));
  CHECK_THROWS_AS(brute_force_restricted_constants(wide, 25),
                  std::invalid_argument);
}

TEST_CASE("sampled constants bracket the brute-force ones") {
  const DenseMatrix a = randn_matrix(12, 9, 14);
  const LeastSquaresObjective f(a, randn_vector(12, 15));
  const auto exact = brute_force_restricted_constants(f, 4);
  const auto est = sampled_restricted_constants(f, 4, 60, 77);

  CHECK(est.method == "sampled");
  CHECK(est.rho_plus <= exact.rho_plus + 1e-10);
  CHECK(est.rho_minus >= exact.rho_minus - 1e-10);
  CHECK(est.rho2_plus == doctest::Approx(exact.rho2_plus).epsilon(1e-10));
  CHECK(est.kappa <= exact.kappa + 1e-8);

  const auto again = sampled_restricted_constants(f, 4, 60, 77);
  CHECK(again.rho_plus == est.rho_plus);
  CHECK(again.rho_minus == est.rho_minus);
}

TEST_CASE("restricted condition numbers are monotone in the level") {
  const DenseMatrix a = randn_matrix(10, 7, 16);
  const LeastSquaresObjective f(a, randn_vector(10, 17));
  double prev_delta = -1.0, prev_kappa = 0.0;
  for (int level = 1; level <= 4; ++level) {
    const auto c = brute_force_restricted_constants(f, level);
    CHECK(c.kappa >= prev_kappa - 1e-12);
    CHECK(c.delta >= prev_delta - 1e-12);
    if (level >= 2) CHECK(c.kappa_tilde <= c.kappa + 1e-12);
    prev_kappa = c.kappa;
    prev_delta = c.delta;
  }
  CHECK(estimate_rho2_plus(f) >=
        brute_force_restricted_constants(f, 2).rho2_plus - 1e-10);
}

TEST_CASE("RIP tradeoff bound reproduces the limiting table values") {
  const double expected[] = {1.0 / 3.0, 0.47759225007251715,
                             0.55198152452040827, 0.83269829999826345};
  const int ratios[] = {1, 2, 3, 30};
  for (int k = 0; k < 4; ++k) {
    const double v = rip_tradeoff_bound(ratios[k], 1, 1e-9);
    CHECK(v == doctest::Approx(expected[k]).epsilon(1e-6));
  }
  // Monotone in s, decreasing in theta.
  CHECK(rip_tradeoff_bound(4, 1) > rip_tradeoff_bound(2, 1));
  CHECK(rip_tradeoff_bound(9, 1, 0.5) < rip_tradeoff_bound(9, 1, 1e-9));
  // theta = 1 collapses to (sqrt(s/s*) - 1) / (sqrt(s/s*) + 1).
  CHECK(rip_tradeoff_bound(4, 1, 1.0) == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(rip_tradeoff_bound(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(rip_tradeoff_bound(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(rip_tradeoff_bound(2, 1, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(rip_tradeoff_bound(2, 1, 1.5), std::invalid_argument);
}

TEST_CASE("restricted gradient norm at a prescribed gradient") {
  // f(x) = 0.5 ||x - b||^2 has gradient x - b; choose x* = 0, b = -(3,-4,1).
  DenseVector b(3);
  b << -3, 4, -1;
  const LeastSquaresObjective f(DenseMatrix::Identity(3, 3), b);
  const DenseVector x_star = DenseVector::Zero(3);

  CHECK(compute_rgoc(f, x_star, 0) == 0.0);
  CHECK(compute_rgoc(f, x_star, 1) == doctest::Approx(4.0));
  CHECK(compute_rgoc(f, x_star, 2) == doctest::Approx(5.0));
  CHECK(compute_rgoc(f, x_star, 3) ==
        doctest::Approx(f.gradient(x_star).norm()));

  // Zero at any global minimizer.
  CHECK(compute_rgoc(f, b, 2) == doctest::Approx(0.0));
}

TEST_CASE("rgoc equals the enumeration maximum and grows with the level") {
  const DenseMatrix a = randn_matrix(9, 6, 18);
  const LeastSquaresObjective f(a, randn_vector(9, 19));
  const DenseVector x = randn_vector(6, 20);
  const DenseVector g = f.gradient(x);

  double prev = 0.0;
  for (int s = 1; s <= 6; ++s) {
    const double z = compute_rgoc(f, x, s);
    CHECK(z >= prev - 1e-15);
    prev = z;

    // max over all supports of size s of ||g_S||_2, by direct enumeration
    double best = 0.0;
    for (int mask = 0; mask < 64; ++mask) {
      if (__builtin_popcount(mask) != s) continue;
      double sq = 0.0;
      for (int i = 0; i < 6; ++i)
        if (mask & (1 << i)) sq += g[i] * g[i];
      best = std::max(best, std::sqrt(sq));
    }
    CHECK(z == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("solution recovery bound on a hand-computed example") {
  DenseVector b(2);
  b << 1.5, 0.2;
  const LeastSquaresObjective f(DenseMatrix::Identity(2, 2), b);
  DenseVector x_star(2), x(2);
  x_star << 1, 0;
  x << 1.4, 0;

  const auto r = check_solution_recovery(f, x, x_star, 1.0, 0.0, 0.1);
  CHECK(r.zeta_level == 1);
  CHECK(r.zeta == doctest::Approx(0.5));
  CHECK(r.distance == doctest::Approx(0.4));
  CHECK(r.bound == doctest::Approx(1.0));  // (zeta/rho)(1 + sqrt(1 + 0))
  CHECK(r.relaxed_bound == doctest::Approx(2.1 * 0.5));
  CHECK(r.bound_holds);
}

TEST_CASE("recovery of the exact minimizer is tight") {
  const DenseMatrix a = randn_matrix(6, 4, 21);
  const DenseVector x_star = hard_threshold(randn_vector(4, 22), 2);
  const LeastSquaresObjective f(a, a * x_star);

  const auto r = check_solution_recovery(f, x_star, x_star, 0.5, 0.0, 0.1);
  CHECK(r.distance == 0.0);
  CHECK(r.zeta == 0.0);
  CHECK(r.bound_holds);
}

TEST_CASE("support recovery condition") {
  DenseVector x_star(3), x(3);
  x_star << 1, 0, 0;
  x << 0.9, 0.1, 0;

  auto r = check_support_recovery(x, x_star, 0.5, 1.0);
  CHECK(r.condition_satisfied);  // min |x*_i| = 1 > 0.5
  CHECK(r.support_recovered);

  r = check_support_recovery(x, x_star, 5.0, 1.0);
  CHECK(!r.condition_satisfied);

  DenseVector missing(3);
  missing << 0, 0.1, 0;
  r = check_support_recovery(missing, x_star, 0.5, 1.0);
  CHECK(!r.support_recovered);

  // Empty target support: vacuously recovered.
  r = check_support_recovery(x, DenseVector::Zero(3), 0.5, 1.0);
  CHECK(r.support_recovered);
}

TEST_CASE("ompr progress lemma verifies on adversarial steps (mu*kt > 1)") {
  const auto inst = ompr_adversarial(1, 2, 0.01);
  const LeastSquaresObjective f(inst.a, inst.b);
  const auto constants = brute_force_restricted_constants(f, 3);

  const auto start = f.restricted_minimize(inst.initial_support, kInnerTol);
  const double mu = std::sqrt(1.0 / 2.0);
  CHECK(mu * constants.kappa_tilde > 1.0);

  std::string detail;
  CHECK(verify_ompr_progress(f, start.x, inst.initial_support, inst.x_star,
                             constants, kInnerTol, &detail));
  CHECK(!detail.empty());
}

TEST_CASE("ompr progress lemma verifies in the mu*kt <= 1 regime") {
  const auto inst = gaussian_planted(400, 10, 2, 0.01, 5);
  const LeastSquaresObjective f(inst.a, inst.b);
  const auto constants = brute_force_restricted_constants(f, 10);

  // Start from eight coordinates that miss one planted one.
  const auto planted = support_of(inst.x_star).indices();
  SupportSet s0;
  for (int i = 0; i < 10 && s0.size() < 8; ++i)
    if (i != planted[0]) s0.insert(i);
  REQUIRE(!support_of(inst.x_star).is_subset_of(s0));

  const double mu = std::sqrt(2.0 / 8.0);
  CHECK(mu * constants.kappa_tilde <= 1.0);

  const auto start = f.restricted_minimize(s0, kInnerTol);
  CHECK(verify_ompr_progress(f, start.x, s0, inst.x_star, constants));
}

TEST_CASE("ompr progress verification is vacuous once the target is covered") {
  const auto inst = gaussian_planted(30, 8, 2, 0.0, 9);
  const LeastSquaresObjective f(inst.a, inst.b);
  const auto constants = brute_force_restricted_constants(f, 6);
  SupportSet s = support_of(inst.x_star);
  for (int i = 0; i < 8 && s.size() < 4; ++i) s.insert(i);
  const auto res = f.restricted_minimize(s, kInnerTol);
  CHECK(verify_ompr_progress(f, res.x, s, inst.x_star, constants));
}

TEST_CASE("ompr progress verification rejects degenerate supports") {
  const auto inst = gaussian_planted(10, 5, 1, 0.0, 2);
  const LeastSquaresObjective f(inst.a, inst.b);
  const auto constants = brute_force_restricted_constants(f, 4);
  CHECK_THROWS_AS(verify_ompr_progress(f, DenseVector::Zero(5), SupportSet{},
                                       inst.x_star, constants),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_ompr_progress(f, DenseVector::Zero(5),
                                       SupportSet::full(5), inst.x_star,
                                       constants),
                  std::invalid_argument);
}

TEST_CASE("brute-force best sparse solutions") {
  const DenseMatrix a = randn_matrix(8, 6, 23);
  const LeastSquaresObjective f(a, randn_vector(8, 24));

  const auto zero = brute_force_best_sparse(f, 0);
  CHECK(zero.x == DenseVector::Zero(6));
  CHECK(zero.value == doctest::Approx(f.value(DenseVector::Zero(6))));

  const auto best2 = brute_force_best_sparse(f, 2);
  CHECK(best2.support.size() <= 2);
  CHECK(f.value(best2.x) == doctest::Approx(best2.value));
  // No 2-subset does better.
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const auto res = f.restricted_minimize({i, j}, kInnerTol);
      CHECK(f.value(res.x) >= best2.value - 1e-10);
    }
  }

  const auto full = brute_force_best_sparse(f, 6);
  const auto direct = f.restricted_minimize(SupportSet::full(6), kInnerTol);
  CHECK(full.value == doctest::Approx(f.value(direct.x)).epsilon(1e-10));

  const LeastSquaresObjective wide(randn_matrix(5, 40, 25),
                                   DenseVector::Zero(5));
  CHECK_THROWS_AS(brute_force_best_sparse(wide, 20), std::invalid_argument);
}

TEST_CASE("brute-force best sparse breaks ties lexicographically") {
  DenseVector b(2);
  b << 1, 1;
  const LeastSquaresObjective f(DenseMatrix::Identity(2, 2), b);
  const auto best = brute_force_best_sparse(f, 1);
  CHECK(best.support == SupportSet{0});
  CHECK(best.value == doctest::Approx(0.5));
}
