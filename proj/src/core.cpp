#include "sparseopt/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sparseopt {

namespace {

void check_index(int i) {
  if (i < 0) throw std::invalid_argument("support index must be nonnegative");
}

}  // namespace

SupportSet::SupportSet(std::initializer_list<int> indices)
    : SupportSet(std::vector<int>(indices)) {}

SupportSet::SupportSet(std::vector<int> indices) : idx_(std::move(indices)) {
  for (int i : idx_) check_index(i);
  std::sort(idx_.begin(), idx_.end());
  idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
}

SupportSet SupportSet::full(int n) {
  if (n < 0) throw std::invalid_argument("support size must be nonnegative");
  SupportSet s;
  s.idx_.resize(n);
  std::iota(s.idx_.begin(), s.idx_.end(), 0);
  return s;
}

bool SupportSet::contains(int i) const {
  return std::binary_search(idx_.begin(), idx_.end(), i);
}

void SupportSet::insert(int i) {
  check_index(i);
  auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
  if (it == idx_.end() || *it != i) idx_.insert(it, i);
}

bool SupportSet::erase(int i) {
  auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
  if (it == idx_.end() || *it != i) return false;
  idx_.erase(it);
  return true;
}

SupportSet SupportSet::unioned(const SupportSet& other) const {
  SupportSet out;
  out.idx_.reserve(idx_.size() + other.idx_.size());
  std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(),
                 other.idx_.end(), std::back_inserter(out.idx_));
  return out;
}

SupportSet SupportSet::intersect(const SupportSet& other) const {
  SupportSet out;
  std::set_intersection(idx_.begin(), idx_.end(), other.idx_.begin(),
                        other.idx_.end(), std::back_inserter(out.idx_));
  return out;
}

SupportSet SupportSet::difference(const SupportSet& other) const {
  SupportSet out;
  std::set_difference(idx_.begin(), idx_.end(), other.idx_.begin(),
                      other.idx_.end(), std::back_inserter(out.idx_));
  return out;
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
  return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(),
                       idx_.end());
}

DenseVector hard_threshold(const DenseVector& x, int r) {
  const int n = static_cast<int>(x.size());
  if (r < 0 || r > n)
    throw std::invalid_argument("hard_threshold: r must lie in [0, dim]");
  if (r == n) return x;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(x[a]), mb = std::abs(x[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  DenseVector out = DenseVector::Zero(n);
  for (int k = 0; k < r; ++k) out[order[k]] = x[order[k]];
  return out;
}

SupportSet support_of(const DenseVector& x, double zero_tol) {
  std::vector<int> idx;
  for (int i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > zero_tol) idx.push_back(i);
  return SupportSet(std::move(idx));
}

RestrictedMinResult ObjectiveOracle::restricted_minimize_ridged(
    const SupportSet&, const SupportSet&, double, double) const {
  throw std::logic_error(
      "this oracle does not support ridge-shifted restricted minimization");
}

double estimate_rho2_plus(const ObjectiveOracle& f) {
  return f.rho2_plus_bound();
}

const char* step_kind_name(StepKind kind) {
  switch (kind) {
    case StepKind::kInsert: return "insert";
    case StepKind::kInsertRemove: return "insert-remove";
    case StepKind::kType1: return "type1";
    case StepKind::kType2: return "type2";
    case StepKind::kGradient: return "gradient";
    case StepKind::kProx: return "prox";
  }
  return "unknown";
}

bool SolverReport::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void SolverReport::add_flag(const std::string& flag) {
  if (!has_flag(flag)) flags.push_back(flag);
}

}  // namespace sparseopt
