#pragma once

#include "sparseopt/core.hpp"
#include "sparseopt/objectives.hpp"

#include <string>

namespace sparseopt {

// Enumeration guard for brute-force routines.
inline constexpr double kMaxEnumeratedSupports = 1e6;

struct RestrictedConstants {
  int level = 0;
  double rho_plus = 0.0;
  double rho_minus = 0.0;
  double rho2_plus = 0.0;
  double kappa = 0.0;        // rho_plus / rho_minus
  double kappa_tilde = 0.0;  // rho2_plus / rho_minus
  double delta = 0.0;        // (kappa - 1) / (kappa + 1)
  std::string method;        // "brute_force" or "sampled"
};

// Exact pairwise restricted smoothness of 0.5||Ax-b||^2 (max top eigenvalue
// over all 2x2 Gram principal minors; the diagonal for n == 1).
double pairwise_rho2_plus(const DenseMatrix& a);

// Exact restricted constants at the given level by enumerating all supports.
// Refuses when C(n, level) exceeds kMaxEnumeratedSupports.
RestrictedConstants brute_force_restricted_constants(
    const LeastSquaresObjective& obj, int level);

// Lower-estimate of the same quantities from randomly sampled supports
// (rho2_plus stays exact via pair enumeration).
RestrictedConstants sampled_restricted_constants(
    const LeastSquaresObjective& obj, int level, int num_samples,
    std::uint64_t seed);

// Largest RIP constant delta_{s+s*} for which the replacement-style guarantee
// applies: ((2-theta) sqrt(s/s*) - 1) / ((2-theta) sqrt(s/s*) + 1).
double rip_tradeoff_bound(int s, int s_star, double theta = 1e-6);

// Restricted gradient optimal constant: l2 norm of the s largest-magnitude
// entries of grad f(x*).
double compute_rgoc(const ObjectiveOracle& f, const DenseVector& x_star,
                    int s);

struct RecoveryAssessment {
  double zeta = 0.0;
  double rho_minus = 0.0;
  double epsilon = 0.0;
  int zeta_level = 0;
  double distance = 0.0;
  double bound = 0.0;          // (zeta/rho)(1 + sqrt(1 + 2 eps rho / zeta^2))
  double relaxed_bound = 0.0;  // (2 + theta) zeta / rho
  bool bound_holds = false;
  bool condition_satisfied = false;  // min |x*_i| > zeta / rho
  bool support_recovered = false;    // supp(x*) subseteq supp(x)
};

// Distance bound for an eps-optimal solution x against the sparse target x*.
RecoveryAssessment check_solution_recovery(const ObjectiveOracle& f,
                                           const DenseVector& x,
                                           const DenseVector& x_star,
                                           double rho_minus, double eps,
                                           double theta);

// Support recovery condition min |x*_i| > zeta / rho_minus and its outcome.
RecoveryAssessment check_support_recovery(const DenseVector& x,
                                          const DenseVector& x_star,
                                          double zeta, double rho_minus);

// Performs one replacement step from (x_t, S_t) and checks the three-case
// per-step progress bound with mu = sqrt(s*/s). Vacuously true when
// supp(x*) subseteq S_t or f(x_t) <= f(x*).
bool verify_ompr_progress(const ObjectiveOracle& f, const DenseVector& x_t,
                          const SupportSet& s_t, const DenseVector& x_star,
                          const RestrictedConstants& constants,
                          double inner_tol = kInnerTol,
                          std::string* detail = nullptr);

struct BestSparseResult {
  DenseVector x;
  double value = 0.0;
  SupportSet support;
};

// Exact best k-sparse minimizer by support enumeration (guarded like the
// constants routine). Ties resolve to the lexicographically first support.
BestSparseResult brute_force_best_sparse(const ObjectiveOracle& f, int k);

}  // namespace sparseopt
