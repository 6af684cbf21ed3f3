#include "sparseopt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace sparseopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void merge_flags(SolverReport* rep, const std::vector<std::string>& flags) {
  for (const auto& f : flags) rep->add_flag(f);
}

// Lowest index among the out-of-support coordinates with the largest
// gradient magnitude; -1 when the support is already full.
int best_gradient_entrant(const DenseVector& grad, const SupportSet& s) {
  int best = -1;
  double mag = -1.0;
  for (int i = 0; i < grad.size(); ++i) {
    if (s.contains(i)) continue;
    const double m = std::abs(grad[i]);
    if (m > mag) {
      mag = m;
      best = i;
    }
  }
  return best;
}

// Lowest index among the removable support coordinates with the smallest
// coordinate magnitude; -1 when nothing is removable.
int smallest_coordinate_victim(const DenseVector& x, const SupportSet& s,
                               std::optional<int> pinned) {
  int best = -1;
  double mag = kInf;
  for (int j : s) {
    if (pinned && *pinned == j) continue;
    const double m = std::abs(x[j]);
    if (m < mag) {
      mag = m;
      best = j;
    }
  }
  return best;
}

SupportSet literal_support(int sparsity, int n, std::optional<int> pinned) {
  SupportSet out;
  if (pinned) out.insert(*pinned);
  for (int i = 0; i < n && out.size() < sparsity; ++i) out.insert(i);
  return out;
}

SupportSet resolve_initial_support(const ObjectiveOracle& f,
                                   const SolverConfig& cfg,
                                   SolverReport* rep) {
  if (cfg.initial_support) {
    const SupportSet& s0 = *cfg.initial_support;
    if (s0.size() != cfg.sparsity)
      throw std::invalid_argument(
          "initial support size must equal the sparsity target");
    if (cfg.pinned && !s0.contains(*cfg.pinned))
      throw std::invalid_argument(
          "initial support must contain the pinned coordinate");
    return s0;
  }
  if (cfg.literal_init) return literal_support(cfg.sparsity, f.dim(), cfg.pinned);
  SolverConfig warm = cfg;
  warm.initial_support.reset();
  warm.literal_init = false;
  const SupportSet s0 = omp(f, warm).support;
  if (rep) rep->add_flag("omp-warm-start");
  return s0;
}

void require_replacement_sparsity(const SolverConfig& cfg) {
  if (cfg.sparsity < 1)
    throw std::invalid_argument("replacement solvers require sparsity >= 1");
}

double lower_bound_for(const ObjectiveOracle& f, const SolverConfig& cfg) {
  return cfg.opt_lower_bound ? *cfg.opt_lower_bound : f.min_value_lower_bound();
}

}  // namespace

void SolverConfig::validate(int n) const {
  if (n < 1) throw std::invalid_argument("objective dimension must be positive");
  if (sparsity < 0 || sparsity > n)
    throw std::invalid_argument("sparsity must lie in [0, dim]");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (max_iterations < 0)
    throw std::invalid_argument("max_iterations must be nonnegative");
  if (!(progress_fraction > 0.0) || progress_fraction > 1.0)
    throw std::invalid_argument("progress_fraction must lie in (0, 1]");
  if (!(inner_tol > 0.0))
    throw std::invalid_argument("inner_tol must be positive");
  if (pinned && (*pinned < 0 || *pinned >= n))
    throw std::invalid_argument("pinned coordinate out of range");
  if (initial_support)
    for (int i : *initial_support)
      if (i < 0 || i >= n)
        throw std::invalid_argument("initial support index out of range");
  if (repetitions && *repetitions < 1)
    throw std::invalid_argument("repetitions must be >= 1");
  if (weight && !(*weight > 0.0))
    throw std::invalid_argument("regularizer weight must be positive");
}

SolverReport iht(const ObjectiveOracle& f, const SolverConfig& cfg,
                 double eta) {
  const int n = f.dim();
  cfg.validate(n);
  if (!(eta > 0.0)) throw std::invalid_argument("iht step size must be positive");
  SolverReport rep;
  rep.rng_seed = cfg.rng_seed;
  DenseVector x = DenseVector::Zero(n);
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    DenseVector z = x - eta * f.gradient(x);
    if (cfg.pinned) {
      const int p = *cfg.pinned;
      const double held = z[p];
      z[p] = 0.0;
      x = hard_threshold(z, std::max(0, cfg.sparsity - 1));
      x[p] = held;
    } else {
      x = hard_threshold(z, cfg.sparsity);
    }
    const double obj = x.allFinite() ? f.value(x)
                                     : std::numeric_limits<double>::quiet_NaN();
    if (!x.allFinite() || !std::isfinite(obj)) {
      std::ostringstream msg;
      msg << "iht diverged: non-finite iterate at iteration " << t
          << " with step eta = " << eta;
      throw std::runtime_error(msg.str());
    }
    IterationRecord rec;
    rec.iteration = t;
    rec.support = support_of(x);
    rec.objective = obj;
    rec.kind = StepKind::kGradient;
    rep.trace.push_back(std::move(rec));
  }
  rep.solution = x;
  rep.support = support_of(x);
  return rep;
}

SolverReport iht(const ObjectiveOracle& f, const SolverConfig& cfg) {
  return iht(f, cfg, 2.0 / estimate_rho2_plus(f));
}

SolverReport omp(const ObjectiveOracle& f, const SolverConfig& cfg) {
  const int n = f.dim();
  cfg.validate(n);
  SolverReport rep;
  rep.rng_seed = cfg.rng_seed;
  SupportSet s;
  DenseVector x = DenseVector::Zero(n);
  int iter = 0;
  auto solve_and_record = [&] {
    RestrictedMinResult rm = f.restricted_minimize(s, cfg.inner_tol);
    x = std::move(rm.x);
    merge_flags(&rep, rm.flags);
    IterationRecord rec;
    rec.iteration = ++iter;
    rec.support = s;
    rec.objective = f.value(x);
    rec.kind = StepKind::kInsert;
    rep.trace.push_back(std::move(rec));
  };
  if (cfg.pinned && cfg.sparsity >= 1) {
    s.insert(*cfg.pinned);
    solve_and_record();
  }
  while (s.size() < cfg.sparsity) {
    const int entrant = best_gradient_entrant(f.gradient(x), s);
    s.insert(entrant);
    solve_and_record();
  }
  rep.solution = x;
  rep.support = s;
  return rep;
}

SolverReport ompr(const ObjectiveOracle& f, const SolverConfig& cfg) {
  const int n = f.dim();
  cfg.validate(n);
  require_replacement_sparsity(cfg);
  SolverReport rep;
  rep.rng_seed = cfg.rng_seed;
  SupportSet s = resolve_initial_support(f, cfg, &rep);
  RestrictedMinResult rm = f.restricted_minimize(s, cfg.inner_tol);
  DenseVector x = std::move(rm.x);
  merge_flags(&rep, rm.flags);
  double fx = f.value(x);
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    if (s.size() >= n) break;
    const int entrant = best_gradient_entrant(f.gradient(x), s);
    const int victim = smallest_coordinate_victim(x, s, cfg.pinned);
    if (entrant < 0 || victim < 0) break;
    SupportSet next = s;
    next.insert(entrant);
    next.erase(victim);
    RestrictedMinResult nm = f.restricted_minimize(next, cfg.inner_tol);
    const double fn = f.value(nm.x);
    if (!cfg.run_exactly_t && fn >= fx) break;
    s = std::move(next);
    x = std::move(nm.x);
    fx = fn;
    merge_flags(&rep, nm.flags);
    IterationRecord rec;
    rec.iteration = t;
    rec.support = s;
    rec.objective = fx;
    rec.kind = StepKind::kInsertRemove;
    rep.trace.push_back(std::move(rec));
  }
  rep.solution = x;
  rep.support = s;
  return rep;
}

SolverReport exhaustive_local_search(const ObjectiveOracle& f,
                                     const SolverConfig& cfg) {
  const int n = f.dim();
  cfg.validate(n);
  require_replacement_sparsity(cfg);
  SolverReport rep;
  rep.rng_seed = cfg.rng_seed;
  SupportSet s = resolve_initial_support(f, cfg, &rep);
  RestrictedMinResult rm = f.restricted_minimize(s, cfg.inner_tol);
  DenseVector x = std::move(rm.x);
  merge_flags(&rep, rm.flags);
  double fx = f.value(x);
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    if (s.size() >= n) break;
    const int victim = smallest_coordinate_victim(x, s, cfg.pinned);
    if (victim < 0) break;
    SupportSet base = s;
    base.erase(victim);
    double best_f = kInf;
    SupportSet best_s;
    DenseVector best_x;
    std::vector<std::string> best_flags;
    for (int i = 0; i < n; ++i) {
      if (s.contains(i)) continue;
      SupportSet cand = base;
      cand.insert(i);
      RestrictedMinResult cm = f.restricted_minimize(cand, cfg.inner_tol);
      const double fc = f.value(cm.x);
      if (fc < best_f) {
        best_f = fc;
        best_s = std::move(cand);
        best_x = std::move(cm.x);
        best_flags = std::move(cm.flags);
      }
    }
    if (best_f >= fx) break;
    s = std::move(best_s);
    x = std::move(best_x);
    fx = best_f;
    merge_flags(&rep, best_flags);
    IterationRecord rec;
    rec.iteration = t;
    rec.support = s;
    rec.objective = fx;
    rec.kind = StepKind::kInsertRemove;
    rep.trace.push_back(std::move(rec));
  }
  rep.solution = x;
  rep.support = s;
  return rep;
}

int sample_proportional_to_square(const DenseVector& x, const SupportSet& r,
                                  std::mt19937_64& rng) {
  double total = 0.0;
  for (int i : r) total += x[i] * x[i];
  if (!(total > 0.0) || !std::isfinite(total)) return -1;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng) * total;
  double acc = 0.0;
  int last = -1;
  for (int i : r) {
    const double w = x[i] * x[i];
    if (w <= 0.0) continue;
    last = i;
    acc += w;
    if (u < acc) return i;
  }
  return last;
}

int arht_repetition_count(int n, double initial_gap, double epsilon) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double inner =
      std::log(std::max(initial_gap / epsilon, 1.0 + 1e-9));
  const double count =
      5.0 * std::log(std::max(6.0 * n * inner, 1.0 + 1e-9));
  return std::max(1, static_cast<int>(std::ceil(count)));
}

SolverReport arht_core(const ObjectiveOracle& f, const SolverConfig& cfg,
                       double opt) {
  const int n = f.dim();
  cfg.validate(n);
  require_replacement_sparsity(cfg);
  const double lower = lower_bound_for(f, cfg);
  const double weight = cfg.weight ? *cfg.weight : estimate_rho2_plus(f);
  const double progress = cfg.strict ? 1.0 : cfg.progress_fraction;
  const bool early_stop = cfg.early_stop && !cfg.strict;

  SolverReport rep;
  rep.rng_seed = cfg.rng_seed;
  rep.repetitions = 1;
  std::mt19937_64 rng(cfg.rng_seed);

  SupportSet s = resolve_initial_support(f, cfg, &rep);
  RegularizedObjective g(f, weight, SupportSet::full(n));
  RestrictedMinResult gm = g.restricted_minimize(s, cfg.inner_tol);
  DenseVector x = std::move(gm.x);
  merge_flags(&rep, gm.flags);
  double gx = g.value(x);

  const double f0 = f.value(DenseVector::Zero(n));
  const double ratio = std::max((f0 - lower) / cfg.epsilon, 1.0 + 1e-9);
  int budget =
      static_cast<int>(std::ceil(2.0 * cfg.sparsity * std::log(ratio)));
  budget = std::clamp(budget, 1, std::max(1, cfg.max_iterations));

  double best_f = kInf;
  DenseVector best_x = DenseVector::Zero(n);
  SupportSet best_s;
  // Checks the unregularized objective on the current support; fills the
  // best-so-far fallback and reports whether the run can stop at `opt`.
  auto reached_opt = [&] {
    RestrictedMinResult fm = f.restricted_minimize(s, cfg.inner_tol);
    const double fv = f.value(fm.x);
    if (fv < best_f) {
      best_f = fv;
      best_x = fm.x;
      best_s = s;
    }
    if (fv <= opt) {
      merge_flags(&rep, fm.flags);
      rep.solution = std::move(fm.x);
      rep.support = s;
      rep.add_flag("early-exit");
      return true;
    }
    return false;
  };

  bool finished = false;
  for (int t = 1; t <= budget; ++t) {
    if (reached_opt()) return rep;

    bool committed = false;
    const int entrant = best_gradient_entrant(g.gradient(x), s);
    const int victim = smallest_coordinate_victim(x, s, cfg.pinned);
    if (entrant >= 0 && victim >= 0) {
      SupportSet next = s;
      next.insert(entrant);
      next.erase(victim);
      RestrictedMinResult nm = g.restricted_minimize(next, cfg.inner_tol);
      const double gn = g.value(nm.x);
      if (gx - gn >= (progress / cfg.sparsity) * (gx - opt)) {
        IterationRecord rec;
        rec.iteration = t;
        rec.kind = StepKind::kType1;
        rec.g_before = gx;
        rec.g_after = gn;
        rec.opt = opt;
        s = std::move(next);
        x = std::move(nm.x);
        gx = gn;
        merge_flags(&rep, nm.flags);
        rec.support = s;
        rec.objective = f.value(x);
        rec.regularized_in_support = g.regularized_set().intersect(s).size();
        rep.trace.push_back(std::move(rec));
        committed = true;
      }
    }
    if (!committed) {
      const int drop = sample_proportional_to_square(x, g.regularized_set(), rng);
      if (drop < 0) {
        rep.add_flag("stalled");
        finished = true;
        break;
      }
      g.unregularize(drop);
      RestrictedMinResult rm = g.restricted_minimize(s, cfg.inner_tol);
      IterationRecord rec;
      rec.iteration = t;
      rec.kind = StepKind::kType2;
      rec.g_before = gx;
      rec.opt = opt;
      x = std::move(rm.x);
      gx = g.value(x);
      merge_flags(&rep, rm.flags);
      rec.g_after = gx;
      rec.support = s;
      rec.objective = f.value(x);
      rec.regularized_in_support = g.regularized_set().intersect(s).size();
      rep.trace.push_back(std::move(rec));
    }
    if (early_stop &&
        2 * s.difference(g.regularized_set()).size() >= s.size()) {
      rep.add_flag("early-stop");
      finished = true;
      break;
    }
  }
  if (!reached_opt()) {
    if (!finished) rep.add_flag("budget-exhausted");
    rep.solution = std::move(best_x);
    rep.support = best_s;
  }
  return rep;
}

SolverReport arht_robust(const ObjectiveOracle& f, const SolverConfig& cfg,
                         double opt, double lower_bound) {
  const int n = f.dim();
  cfg.validate(n);
  require_replacement_sparsity(cfg);
  const double f0 = f.value(DenseVector::Zero(n));
  const int reps = cfg.repetitions
                       ? *cfg.repetitions
                       : arht_repetition_count(n, f0 - lower_bound, cfg.epsilon);

  SolverConfig run_cfg = cfg;
  run_cfg.opt_lower_bound = lower_bound;
  if (!run_cfg.initial_support && !run_cfg.literal_init)
    run_cfg.initial_support = resolve_initial_support(f, cfg, nullptr);

  SolverReport best;
  double best_f = kInf;
  std::vector<IterationRecord> all_trace;
  std::vector<std::string> all_flags;
  for (int z = 0; z < reps; ++z) {
    run_cfg.rng_seed =
        z == 0 ? cfg.rng_seed
               : mix_seed(cfg.rng_seed, static_cast<std::uint64_t>(z));
    SolverReport run = arht_core(f, run_cfg, opt);
    for (IterationRecord rec : run.trace) {
      rec.run = z;
      all_trace.push_back(std::move(rec));
    }
    for (const auto& flag : run.flags)
      if (std::find(all_flags.begin(), all_flags.end(), flag) == all_flags.end())
        all_flags.push_back(flag);
    const double fv = f.value(run.solution);
    if (fv < best_f) {
      best_f = fv;
      best = std::move(run);
    }
  }
  best.trace = std::move(all_trace);
  best.flags = std::move(all_flags);
  best.repetitions = reps;
  best.rng_seed = cfg.rng_seed;
  return best;
}

SolverReport arht(const ObjectiveOracle& f, const SolverConfig& cfg) {
  const int n = f.dim();
  cfg.validate(n);
  require_replacement_sparsity(cfg);
  const double lower = lower_bound_for(f, cfg);

  SolverConfig inner_cfg = cfg;
  inner_cfg.opt_lower_bound = lower;
  inner_cfg.epsilon = cfg.epsilon / 3.0;
  SolverReport rep;
  rep.rng_seed = cfg.rng_seed;
  if (!inner_cfg.initial_support && !inner_cfg.literal_init) {
    inner_cfg.initial_support = resolve_initial_support(f, cfg, &rep);
  }

  double l = lower;
  DenseVector b = DenseVector::Zero(n);
  SupportSet b_support;
  double r = f.value(b);
  rep.search_trace.push_back({l, r});

  constexpr int kSearchCap = 500;
  int steps = 0;
  int run_offset = 0;
  while (r - l > cfg.epsilon) {
    if (++steps > kSearchCap) {
      rep.add_flag("search-cap");
      break;
    }
    const double m = 0.5 * (l + r);
    SolverConfig step_cfg = inner_cfg;
    step_cfg.rng_seed = mix_seed(cfg.rng_seed, 0x5eedULL + steps);
    SolverReport probe = arht_robust(f, step_cfg, m, lower);
    for (IterationRecord rec : probe.trace) {
      rec.run += run_offset;
      rep.trace.push_back(std::move(rec));
    }
    run_offset += std::max(1, probe.repetitions);
    merge_flags(&rep, probe.flags);
    rep.repetitions = probe.repetitions;
    const double fx = f.value(probe.solution);
    if (fx > m + cfg.epsilon / 3.0) {
      l = m;
    } else {
      b = std::move(probe.solution);
      b_support = std::move(probe.support);
      r = fx;
    }
    rep.search_trace.push_back({l, r});
  }
  rep.solution = std::move(b);
  rep.support = std::move(b_support);
  return rep;
}

DenseVector l1_proximal_minimize(const ObjectiveOracle& f, double lambda,
                                 int max_iterations, double tol,
                                 std::optional<int> pinned) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  const int n = f.dim();
  const double smooth = f.smoothness_upper_bound();
  if (!(smooth > 0.0))
    throw std::runtime_error("nonpositive smoothness bound for proximal step");
  const double step = 1.0 / smooth;
  const double cut = lambda * step;
  DenseVector x = DenseVector::Zero(n);
  for (int t = 0; t < max_iterations; ++t) {
    DenseVector z = x - step * f.gradient(x);
    DenseVector next(n);
    for (int i = 0; i < n; ++i) {
      if (pinned && *pinned == i) {
        next[i] = z[i];
      } else if (z[i] > cut) {
        next[i] = z[i] - cut;
      } else if (z[i] < -cut) {
        next[i] = z[i] + cut;
      } else {
        next[i] = 0.0;
      }
    }
    const double delta = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    if (delta <= tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) break;
  }
  return x;
}

SolverReport lasso_path(const ObjectiveOracle& f, const SolverConfig& cfg) {
  const int n = f.dim();
  cfg.validate(n);
  require_replacement_sparsity(cfg);
  SolverReport rep;
  rep.rng_seed = cfg.rng_seed;
  const int ista_budget = std::max(2000, cfg.max_iterations);
  const int target = cfg.sparsity - (cfg.pinned ? 1 : 0);

  SupportSet best_support;
  bool exact = (target == 0);
  const double lambda_max =
      f.gradient(DenseVector::Zero(n)).lpNorm<Eigen::Infinity>();
  if (lambda_max > 0.0 && !exact) {
    double lo = 1e-8 * lambda_max;
    double hi = lambda_max;
    int best_count = 0;
    for (int probe = 1; probe <= 50; ++probe) {
      const double mid = 0.5 * (lo + hi);
      const DenseVector xl =
          l1_proximal_minimize(f, mid, ista_budget, 1e-11, cfg.pinned);
      SupportSet sl = support_of(xl);
      if (cfg.pinned) sl.erase(*cfg.pinned);
      IterationRecord rec;
      rec.iteration = probe;
      rec.support = sl;
      rec.objective = f.value(xl);
      rec.kind = StepKind::kProx;
      rep.trace.push_back(std::move(rec));
      if (sl.size() == target) {
        best_support = std::move(sl);
        exact = true;
        break;
      }
      if (sl.size() < target) {
        if (sl.size() > best_count) {
          best_count = sl.size();
          best_support = sl;
        }
        hi = mid;
      } else {
        lo = mid;
      }
    }
  } else if (lambda_max <= 0.0) {
    rep.add_flag("zero-gradient");
    exact = true;
  }
  if (!exact) rep.add_flag("sparsity-miss");

  SupportSet refit = best_support;
  if (cfg.pinned) refit.insert(*cfg.pinned);
  RestrictedMinResult rm = f.restricted_minimize(refit, cfg.inner_tol);
  merge_flags(&rep, rm.flags);
  rep.solution = std::move(rm.x);
  rep.support = std::move(refit);
  rep.add_flag("debiased");
  return rep;
}

}  // namespace sparseopt
