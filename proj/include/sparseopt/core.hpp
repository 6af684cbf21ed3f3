#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

namespace sparseopt {

using DenseVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

// Entries with magnitude <= kZeroTol count as zero for sparsity accounting.
inline constexpr double kZeroTol = 1e-12;
// Default inf-norm tolerance for restricted gradients at inner minimizers.
inline constexpr double kInnerTol = 1e-10;

// Sorted set of nonnegative coordinate indices.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(std::initializer_list<int> indices);
  explicit SupportSet(std::vector<int> indices);

  // {0, 1, ..., n-1}
  static SupportSet full(int n);

  int size() const { return static_cast<int>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  bool contains(int i) const;
  void insert(int i);
  bool erase(int i);

  SupportSet unioned(const SupportSet& other) const;
  SupportSet intersect(const SupportSet& other) const;
  SupportSet difference(const SupportSet& other) const;
  bool is_subset_of(const SupportSet& other) const;

  const std::vector<int>& indices() const { return idx_; }
  std::vector<int>::const_iterator begin() const { return idx_.begin(); }
  std::vector<int>::const_iterator end() const { return idx_.end(); }

  bool operator==(const SupportSet& other) const = default;

 private:
  std::vector<int> idx_;
};

// Keeps the r largest-magnitude entries of x (ties broken toward the lowest
// index) and zeroes the rest.
DenseVector hard_threshold(const DenseVector& x, int r);

SupportSet support_of(const DenseVector& x, double zero_tol = kZeroTol);

struct RestrictedMinResult {
  DenseVector x;
  std::vector<std::string> flags;
};

// First-order oracle for a convex objective, plus restricted minimization over
// a fixed support.
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  virtual int dim() const = 0;
  virtual double value(const DenseVector& x) const = 0;
  virtual DenseVector gradient(const DenseVector& x) const = 0;

  // argmin over supp(x) subseteq support; the restricted gradient at the
  // result has inf-norm <= tol (else the result is flagged).
  virtual RestrictedMinResult restricted_minimize(const SupportSet& support,
                                                  double tol) const = 0;

  // argmin of f(x) + (ridge_weight/2) * sum_{i in ridge_set} x_i^2 over
  // supp(x) subseteq support. Not every oracle has to provide this; the
  // default throws.
  virtual RestrictedMinResult restricted_minimize_ridged(
      const SupportSet& support, const SupportSet& ridge_set,
      double ridge_weight, double tol) const;

  // Upper bound on the pairwise restricted smoothness constant.
  virtual double rho2_plus_bound() const = 0;

  // Lower bound on min_x f(x). Valid default for nonnegative losses.
  virtual double min_value_lower_bound() const { return 0.0; }

  // Upper bound on the (unrestricted) smoothness constant, used for proximal
  // step sizes.
  virtual double smoothness_upper_bound() const = 0;
};

double estimate_rho2_plus(const ObjectiveOracle& f);

enum class StepKind { kInsert, kInsertRemove, kType1, kType2, kGradient, kProx };

const char* step_kind_name(StepKind kind);

struct IterationRecord {
  int iteration = 0;
  int run = 0;
  SupportSet support;
  double objective = 0.0;
  StepKind kind = StepKind::kInsert;
  // Regularized-objective bookkeeping; meaningful for type-1/type-2 records.
  double g_before = std::numeric_limits<double>::quiet_NaN();
  double g_after = std::numeric_limits<double>::quiet_NaN();
  double opt = std::numeric_limits<double>::quiet_NaN();
  int regularized_in_support = -1;
};

struct BinarySearchStep {
  double lower = 0.0;
  double upper = 0.0;
};

struct SolverReport {
  DenseVector solution;
  SupportSet support;
  std::vector<IterationRecord> trace;
  std::vector<BinarySearchStep> search_trace;
  std::uint64_t rng_seed = 0;
  int repetitions = 0;
  std::vector<std::string> flags;

  bool has_flag(const std::string& flag) const;
  void add_flag(const std::string& flag);
};

}  // namespace sparseopt
