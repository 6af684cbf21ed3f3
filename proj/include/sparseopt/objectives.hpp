#pragma once

#include "sparseopt/core.hpp"

namespace sparseopt {

// f(x) = 0.5 * ||A x - b||_2^2
class LeastSquaresObjective : public ObjectiveOracle {
 public:
  LeastSquaresObjective(DenseMatrix a, DenseVector b);

  int dim() const override { return static_cast<int>(a_.cols()); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  RestrictedMinResult restricted_minimize(const SupportSet& support,
                                          double tol) const override;
  RestrictedMinResult restricted_minimize_ridged(const SupportSet& support,
                                                 const SupportSet& ridge_set,
                                                 double ridge_weight,
                                                 double tol) const override;
  double rho2_plus_bound() const override;
  double min_value_lower_bound() const override;
  double smoothness_upper_bound() const override;

  const DenseMatrix& design() const { return a_; }
  const DenseVector& target() const { return b_; }

 private:
  DenseMatrix a_;
  DenseVector b_;
  mutable double min_value_ = std::numeric_limits<double>::quiet_NaN();
  mutable double smoothness_ = std::numeric_limits<double>::quiet_NaN();
};

// f(x) = sum_i [log(1 + exp(z_i)) - b_i z_i], z = A x, labels b_i in [0, 1].
class LogisticObjective : public ObjectiveOracle {
 public:
  // Coordinates are clamped to this magnitude when the restricted problem is
  // unbounded (separable data); the result is flagged "capped".
  static constexpr double kCoefficientCap = 1e4;

  LogisticObjective(DenseMatrix a, DenseVector labels);

  int dim() const override { return static_cast<int>(a_.cols()); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  RestrictedMinResult restricted_minimize(const SupportSet& support,
                                          double tol) const override;
  RestrictedMinResult restricted_minimize_ridged(const SupportSet& support,
                                                 const SupportSet& ridge_set,
                                                 double ridge_weight,
                                                 double tol) const override;
  double rho2_plus_bound() const override;
  double smoothness_upper_bound() const override;

  const DenseMatrix& design() const { return a_; }
  const DenseVector& labels() const { return b_; }

 private:
  DenseMatrix a_;
  DenseVector b_;
  mutable double smoothness_ = std::numeric_limits<double>::quiet_NaN();
};

// g(x) = f(x) + (weight/2) * ||x_R||_2^2 for a shrinking coordinate set R.
class RegularizedObjective : public ObjectiveOracle {
 public:
  RegularizedObjective(const ObjectiveOracle& inner, double weight,
                       SupportSet regularized);

  int dim() const override { return inner_->dim(); }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  RestrictedMinResult restricted_minimize(const SupportSet& support,
                                          double tol) const override;
  double rho2_plus_bound() const override;
  double min_value_lower_bound() const override {
    return inner_->min_value_lower_bound();
  }
  double smoothness_upper_bound() const override;

  // Removes i from the regularized set; i must currently be regularized.
  void unregularize(int i);

  const SupportSet& regularized_set() const { return reg_; }
  double weight() const { return weight_; }
  const ObjectiveOracle& inner() const { return *inner_; }

 private:
  const ObjectiveOracle* inner_;
  double weight_;
  SupportSet reg_;
};

}  // namespace sparseopt
