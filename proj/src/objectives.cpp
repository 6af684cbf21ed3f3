#include "sparseopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparseopt {

namespace {

void check_finite(const DenseMatrix& a, const DenseVector& b) {
  if (a.rows() != b.size())
    throw std::invalid_argument("design rows and target length differ");
  if (a.size() == 0) throw std::invalid_argument("empty design matrix");
  if (!a.allFinite() || !b.allFinite())
    throw std::invalid_argument("design/target must be finite");
}

void check_support_range(const SupportSet& support, int n) {
  if (!support.empty() && support.indices().back() >= n)
    throw std::invalid_argument("support index out of range");
}

DenseVector scatter(const DenseVector& xs, const SupportSet& support, int n) {
  DenseVector x = DenseVector::Zero(n);
  int k = 0;
  for (int i : support) x[i] = xs[k++];
  return x;
}

double stable_logistic_term(double z, double y) {
  // log(1 + exp(z)) - y z, computed without overflow
  const double softplus = z > 0 ? z + std::log1p(std::exp(-z))
                                : std::log1p(std::exp(z));
  return softplus - y * z;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LeastSquaresObjective::LeastSquaresObjective(DenseMatrix a, DenseVector b)
    : a_(std::move(a)), b_(std::move(b)) {
  check_finite(a_, b_);
}

double LeastSquaresObjective::value(const DenseVector& x) const {
  return 0.5 * (a_ * x - b_).squaredNorm();
}

DenseVector LeastSquaresObjective::gradient(const DenseVector& x) const {
  return a_.transpose() * (a_ * x - b_);
}

RestrictedMinResult LeastSquaresObjective::restricted_minimize(
    const SupportSet& support, double tol) const {
  return restricted_minimize_ridged(support, SupportSet{}, 0.0, tol);
}

RestrictedMinResult LeastSquaresObjective::restricted_minimize_ridged(
    const SupportSet& support, const SupportSet& ridge_set,
    double ridge_weight, double tol) const {
  const int n = dim();
  check_support_range(support, n);
  RestrictedMinResult res;
  if (support.empty()) {
    res.x = DenseVector::Zero(n);
    return res;
  }
  const int k = support.size();
  DenseMatrix as(a_.rows(), k);
  {
    int c = 0;
    for (int i : support) as.col(c++) = a_.col(i);
  }
  DenseMatrix gram = as.transpose() * as;
  std::vector<bool> ridged(k, false);
  {
    int c = 0;
    for (int i : support) {
      if (ridge_weight > 0.0 && ridge_set.contains(i)) {
        gram(c, c) += ridge_weight;
        ridged[c] = true;
      }
      ++c;
    }
  }
  const DenseVector rhs = as.transpose() * b_;
  Eigen::LDLT<DenseMatrix> ldlt(gram);
  DenseVector xs = ldlt.solve(rhs);

  auto restricted_grad = [&](const DenseVector& v) -> DenseVector {
    DenseVector g = as.transpose() * (as * v - b_);
    for (int c = 0; c < k; ++c)
      if (ridged[c]) g[c] += ridge_weight * v[c];
    return g;
  };

  for (int pass = 0; pass < 3 && xs.allFinite(); ++pass) {
    DenseVector g = restricted_grad(xs);
    if (g.lpNorm<Eigen::Infinity>() <= tol) break;
    xs -= ldlt.solve(g);
  }

  DenseVector g = restricted_grad(xs);
  if (!xs.allFinite() || g.lpNorm<Eigen::Infinity>() > tol) {
    // Rank-deficient restricted system: fall back to the minimum-norm
    // solution of the (possibly ridge-augmented) stacked system.
    int extra = 0;
    for (int c = 0; c < k; ++c) extra += ridged[c] ? 1 : 0;
    DenseMatrix stacked(a_.rows() + extra, k);
    DenseVector target(a_.rows() + extra);
    stacked.topRows(a_.rows()) = as;
    target.head(a_.rows()) = b_;
    int r = static_cast<int>(a_.rows());
    for (int c = 0; c < k; ++c) {
      if (!ridged[c]) continue;
      stacked.row(r).setZero();
      stacked(r, c) = std::sqrt(ridge_weight);
      target[r] = 0.0;
      ++r;
    }
    xs = stacked.completeOrthogonalDecomposition().solve(target);
    res.flags.push_back("min-norm");
    g = restricted_grad(xs);
    if (!xs.allFinite() || g.lpNorm<Eigen::Infinity>() > tol)
      res.flags.push_back("inexact");
  }
  res.x = scatter(xs, support, n);
  return res;
}

double LeastSquaresObjective::rho2_plus_bound() const {
  double max_sq = 0.0;
  for (int j = 0; j < a_.cols(); ++j)
    max_sq = std::max(max_sq, a_.col(j).squaredNorm());
  return 2.0 * max_sq;
}

double LeastSquaresObjective::min_value_lower_bound() const {
  if (std::isnan(min_value_)) {
    DenseVector x = a_.completeOrthogonalDecomposition().solve(b_);
    min_value_ = value(x);
  }
  return min_value_;
}

double LeastSquaresObjective::smoothness_upper_bound() const {
  if (std::isnan(smoothness_)) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a_.transpose() * a_,
                                                  Eigen::EigenvaluesOnly);
    smoothness_ = es.eigenvalues().maxCoeff();
  }
  return smoothness_;
}

LogisticObjective::LogisticObjective(DenseMatrix a, DenseVector labels)
    : a_(std::move(a)), b_(std::move(labels)) {
  check_finite(a_, b_);
  for (int i = 0; i < b_.size(); ++i)
    if (b_[i] < 0.0 || b_[i] > 1.0)
      throw std::invalid_argument("logistic labels must lie in [0, 1]");
}

double LogisticObjective::value(const DenseVector& x) const {
  const DenseVector z = a_ * x;
  double v = 0.0;
  for (int i = 0; i < z.size(); ++i) v += stable_logistic_term(z[i], b_[i]);
  return v;
}

DenseVector LogisticObjective::gradient(const DenseVector& x) const {
  const DenseVector z = a_ * x;
  DenseVector p(z.size());
  for (int i = 0; i < z.size(); ++i) p[i] = sigmoid(z[i]) - b_[i];
  return a_.transpose() * p;
}

RestrictedMinResult LogisticObjective::restricted_minimize(
    const SupportSet& support, double tol) const {
  return restricted_minimize_ridged(support, SupportSet{}, 0.0, tol);
}

RestrictedMinResult LogisticObjective::restricted_minimize_ridged(
    const SupportSet& support, const SupportSet& ridge_set,
    double ridge_weight, double tol) const {
  const int n = dim();
  check_support_range(support, n);
  RestrictedMinResult res;
  if (support.empty()) {
    res.x = DenseVector::Zero(n);
    return res;
  }
  const int k = support.size();
  const int m = static_cast<int>(a_.rows());
  DenseMatrix as(m, k);
  std::vector<bool> ridged(k, false);
  {
    int c = 0;
    for (int i : support) {
      as.col(c) = a_.col(i);
      ridged[c] = ridge_weight > 0.0 && ridge_set.contains(i);
      ++c;
    }
  }
  auto obj = [&](const DenseVector& v) {
    const DenseVector z = as * v;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += stable_logistic_term(z[i], b_[i]);
    for (int c = 0; c < k; ++c)
      if (ridged[c]) s += 0.5 * ridge_weight * v[c] * v[c];
    return s;
  };

  DenseVector xs = DenseVector::Zero(k);
  double fv = obj(xs);
  bool capped = false;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const DenseVector z = as * xs;
    DenseVector p(m), w(m);
    for (int i = 0; i < m; ++i) {
      const double s = sigmoid(z[i]);
      p[i] = s - b_[i];
      w[i] = std::max(s * (1.0 - s), 1e-12);
    }
    DenseVector grad = as.transpose() * p;
    for (int c = 0; c < k; ++c)
      if (ridged[c]) grad[c] += ridge_weight * xs[c];
    if (grad.lpNorm<Eigen::Infinity>() <= tol) {
      converged = true;
      break;
    }
    DenseMatrix hess = as.transpose() * w.asDiagonal() * as;
    for (int c = 0; c < k; ++c) {
      if (ridged[c]) hess(c, c) += ridge_weight;
      hess(c, c) += 1e-12;
    }
    DenseVector step = hess.ldlt().solve(-grad);
    double t = 1.0;
    const double slope = grad.dot(step);
    while (t > 1e-14 && obj(xs + t * step) > fv + 1e-4 * t * slope) t *= 0.5;
    xs += t * step;
    fv = obj(xs);
    if (xs.lpNorm<Eigen::Infinity>() > kCoefficientCap) {
      for (int c = 0; c < k; ++c)
        xs[c] = std::clamp(xs[c], -kCoefficientCap, kCoefficientCap);
      capped = true;
      break;
    }
  }
  if (capped) res.flags.push_back("capped");
  if (!capped && !converged) res.flags.push_back("inexact");
  res.x = scatter(xs, support, n);
  return res;
}

double LogisticObjective::rho2_plus_bound() const {
  double max_sq = 0.0;
  for (int j = 0; j < a_.cols(); ++j)
    max_sq = std::max(max_sq, a_.col(j).squaredNorm());
  return 2.0 * 0.25 * max_sq;
}

double LogisticObjective::smoothness_upper_bound() const {
  if (std::isnan(smoothness_)) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a_.transpose() * a_,
                                                  Eigen::EigenvaluesOnly);
    smoothness_ = 0.25 * es.eigenvalues().maxCoeff();
  }
  return smoothness_;
}

RegularizedObjective::RegularizedObjective(const ObjectiveOracle& inner,
                                           double weight,
                                           SupportSet regularized)
    : inner_(&inner), weight_(weight), reg_(std::move(regularized)) {
  if (!(weight > 0.0))
    throw std::invalid_argument("regularization weight must be positive");
  if (!reg_.empty() && reg_.indices().back() >= inner_->dim())
    throw std::invalid_argument("regularized index out of range");
}

double RegularizedObjective::value(const DenseVector& x) const {
  double phi = 0.0;
  for (int i : reg_) phi += x[i] * x[i];
  return inner_->value(x) + 0.5 * weight_ * phi;
}

DenseVector RegularizedObjective::gradient(const DenseVector& x) const {
  DenseVector g = inner_->gradient(x);
  for (int i : reg_) g[i] += weight_ * x[i];
  return g;
}

RestrictedMinResult RegularizedObjective::restricted_minimize(
    const SupportSet& support, double tol) const {
  return inner_->restricted_minimize_ridged(support, reg_, weight_, tol);
}

double RegularizedObjective::rho2_plus_bound() const {
  return inner_->rho2_plus_bound() + weight_;
}

double RegularizedObjective::smoothness_upper_bound() const {
  return inner_->smoothness_upper_bound() + weight_;
}

void RegularizedObjective::unregularize(int i) {
  if (!reg_.erase(i))
    throw std::invalid_argument("unregularize: index is not regularized");
}

}  // namespace sparseopt
