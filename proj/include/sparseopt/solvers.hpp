#pragma once

#include "sparseopt/core.hpp"
#include "sparseopt/objectives.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace sparseopt {

struct SolverConfig {
  int sparsity = 1;
  double epsilon = 1e-3;
  int max_iterations = 1000;
  std::uint64_t rng_seed = 0;
  // Relaxed per-iteration progress requirement: a swap commits when it
  // decreases g by at least (progress_fraction / s) * (g - opt).
  double progress_fraction = 1e-3;
  double inner_tol = kInnerTol;
  std::optional<SupportSet> initial_support;
  // Start replacement solvers from {0, ..., s-1} instead of the OMP support.
  bool literal_init = false;
  // OMPR: commit exactly max_iterations swaps, improving or not.
  bool run_exactly_t = false;
  // Theoretical mode: progress_fraction treated as 1, no early-stop
  // heuristic.
  bool strict = false;
  // Stop a regularized run once at least half of the support is
  // unregularized (ignored in strict mode).
  bool early_stop = true;
  // Coordinate pinned into every support (intercept); never swapped out.
  std::optional<int> pinned;
  std::optional<double> weight;           // regularizer weight override
  std::optional<int> repetitions;         // robust repetition override
  std::optional<double> opt_lower_bound;  // override for B

  void validate(int n) const;
};

struct ArhtState {
  SupportSet support;      // S
  SupportSet regularized;  // R
  DenseVector x;
  double opt = 0.0;
  double lower_bound = 0.0;  // B
};

// Iterative hard thresholding: x <- H_s(x - eta * grad f(x)), exactly
// cfg.max_iterations updates. The two-argument form uses
// eta = 2 / estimate_rho2_plus(f).
SolverReport iht(const ObjectiveOracle& f, const SolverConfig& cfg,
                 double eta);
SolverReport iht(const ObjectiveOracle& f, const SolverConfig& cfg);

// Orthogonal matching pursuit: grow the support one best-gradient coordinate
// at a time, re-solving restricted minimization after each insertion.
SolverReport omp(const ObjectiveOracle& f, const SolverConfig& cfg);

// Orthogonal matching pursuit with replacement: per iteration insert the
// best-gradient coordinate and remove the smallest-magnitude one; stops on
// non-improvement unless cfg.run_exactly_t.
SolverReport ompr(const ObjectiveOracle& f, const SolverConfig& cfg);

// Exhaustive local search: remove argmin x_j^2, then try every entrant by
// full restricted minimization and keep the best.
SolverReport exhaustive_local_search(const ObjectiveOracle& f,
                                     const SolverConfig& cfg);

// Core regularized run against a fixed guess `opt` of the target value.
// Swaps on g_R = f + (weight/2)||x_R||^2; insufficient progress triggers
// unregularization of an index sampled proportional to x_i^2.
SolverReport arht_core(const ObjectiveOracle& f, const SolverConfig& cfg,
                       double opt);

// Repeats arht_core with fresh seeds and keeps the best-f solution.
SolverReport arht_robust(const ObjectiveOracle& f, const SolverConfig& cfg,
                         double opt, double lower_bound);

// Full driver: binary search on opt between the lower bound B and f(0),
// shrinking [l, r] until r - l <= epsilon; returns b with f(b) = r.
SolverReport arht(const ObjectiveOracle& f, const SolverConfig& cfg);

// l1-regularized baseline: proximal gradient at a given lambda, with an
// outer binary search on lambda targeting the requested sparsity, followed
// by a de-biased restricted re-fit.
SolverReport lasso_path(const ObjectiveOracle& f, const SolverConfig& cfg);

// ceil(5 * ln(6 * n * ln((f0 - lower_bound) / epsilon))), floored at 1.
int arht_repetition_count(int n, double initial_gap, double epsilon);

// Draws an index i in `r` with probability x_i^2 / sum_{j in r} x_j^2;
// returns -1 when the mass is zero.
int sample_proportional_to_square(const DenseVector& x, const SupportSet& r,
                                  std::mt19937_64& rng);

// Proximal-gradient (ISTA) minimizer of f(x) + lambda * ||x||_1 with step
// 1 / f.smoothness_upper_bound(); a pinned coordinate is never thresholded.
DenseVector l1_proximal_minimize(const ObjectiveOracle& f, double lambda,
                                 int max_iterations, double tol,
                                 std::optional<int> pinned = std::nullopt);

}  // namespace sparseopt
