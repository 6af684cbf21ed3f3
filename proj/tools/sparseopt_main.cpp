#include <CLI11.hpp>
#include <json.hpp>

#include "sparseopt/analysis.hpp"
#include "sparseopt/dataset.hpp"
#include "sparseopt/instances.hpp"
#include "sparseopt/solvers.hpp"
#include "sparseopt/sweep.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace sparseopt;

struct ProblemOptions {
  std::string instance_path;
  std::string data_path;
  std::string label_column;
  std::string task = "regression";
  std::vector<std::string> categorical;
  bool for_arht_embedding = false;
};

struct LoadedProblem {
  std::unique_ptr<ObjectiveOracle> objective;
  std::optional<int> pinned;
  std::optional<PlantedInstance> instance;
  std::string name;
};

void add_problem_flags(CLI::App* cmd, ProblemOptions* opt) {
  cmd->add_option("--instance", opt->instance_path,
                  "instance JSON produced by `gen`");
  cmd->add_option("--data", opt->data_path, "CSV dataset path");
  cmd->add_option("--label", opt->label_column, "label column name");
  cmd->add_option("--task", opt->task, "regression or binary")
      ->check(CLI::IsMember({"regression", "binary"}));
  cmd->add_option("--categorical", opt->categorical,
                  "categorical columns to one-hot encode");
  cmd->add_flag("--arht-embedding", opt->for_arht_embedding,
                "append the identity regularization block when preprocessing");
}

LoadedProblem load_problem(const ProblemOptions& opt) {
  LoadedProblem out;
  if (!opt.instance_path.empty() && !opt.data_path.empty())
    throw std::invalid_argument("pass either --instance or --data, not both");
  if (!opt.instance_path.empty()) {
    PlantedInstance inst = load_instance(opt.instance_path);
    out.objective = std::make_unique<LeastSquaresObjective>(inst.a, inst.b);
    out.name = inst.kind;
    out.instance = std::move(inst);
    return out;
  }
  if (opt.data_path.empty())
    throw std::invalid_argument("--instance or --data is required");
  if (opt.label_column.empty())
    throw std::invalid_argument("--label is required with --data");
  CsvSchema schema;
  schema.label_column = opt.label_column;
  schema.task = parse_task(opt.task);
  schema.categorical_columns = opt.categorical;
  const Dataset raw = load_csv(opt.data_path, schema);
  const Dataset ds = preprocess(raw, opt.for_arht_embedding);
  out.objective = make_objective(ds);
  out.pinned = ds.intercept_index;
  out.name = ds.name;
  return out;
}

json support_to_json(const SupportSet& s) {
  json arr = json::array();
  for (int i : s) arr.push_back(i);
  return arr;
}

json report_summary(const ObjectiveOracle& f, const SolverReport& rep,
                    const std::string& algo, const SolverConfig& cfg) {
  json out;
  out["algorithm"] = algo;
  out["sparsity"] = cfg.sparsity;
  out["loss"] = f.value(rep.solution);
  out["support"] = support_to_json(rep.support);
  out["nonzeros"] = support_of(rep.solution).size();
  out["iterations"] = rep.trace.size();
  out["repetitions"] = rep.repetitions;
  out["seed"] = rep.rng_seed;
  out["flags"] = rep.flags;
  if (!rep.search_trace.empty()) {
    json search = json::array();
    for (const auto& st : rep.search_trace)
      search.push_back({{"lower", st.lower}, {"upper", st.upper}});
    out["search_trace"] = std::move(search);
  }
  return out;
}

void write_text(const std::string& path, const std::string& payload) {
  if (path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << payload;
}

int run(int argc, char** argv) {
  CLI::App app{"sparse convex optimization toolkit"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  std::string gen_kind = "gaussian";
  int gen_m = 100, gen_n = 256, gen_s_star = 8;
  double gen_noise = 0.0, gen_kappa = 4.0, gen_delta = 1e-3;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "-";
  gen->add_option("--kind", gen_kind, "gaussian or adversarial")
      ->check(CLI::IsMember({"gaussian", "adversarial"}));
  gen->add_option("--rows", gen_m, "number of rows (gaussian)");
  gen->add_option("--cols", gen_n, "number of columns (gaussian)");
  gen->add_option("--s-star", gen_s_star, "planted sparsity");
  gen->add_option("--noise", gen_noise, "noise level (gaussian)");
  gen->add_option("--kappa", gen_kappa, "condition number (adversarial, even integer)");
  gen->add_option("--delta", gen_delta, "RIP-style delta (adversarial, in (0, 1/8))");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--out", gen_out, "output path ('-' for stdout)");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "run one solver at one sparsity");
  ProblemOptions solve_problem;
  add_problem_flags(solve, &solve_problem);
  std::string solve_algo = "arht";
  SolverConfig solve_cfg;
  int solve_run_exactly_t = 0;
  bool solve_literal = false, solve_strict = false, solve_use_s0 = false;
  std::string solve_out = "-";
  solve->add_option("--algo", solve_algo, "iht|omp|ompr|els|arht|lasso");
  solve->add_option("--sparsity", solve_cfg.sparsity, "target sparsity")
      ->required();
  solve->add_option("--eps", solve_cfg.epsilon, "target accuracy");
  solve->add_option("--seed", solve_cfg.rng_seed, "rng seed");
  solve->add_option("--max-iterations", solve_cfg.max_iterations,
                    "iteration cap");
  solve->add_option("--progress-fraction", solve_cfg.progress_fraction,
                    "relaxed progress fraction");
  solve->add_option("--run-exactly-t", solve_run_exactly_t,
                    "commit exactly T replacement steps (ompr)");
  solve->add_flag("--literal-init", solve_literal,
                  "start from {0..s-1} instead of the OMP warm start");
  solve->add_flag("--instance-s0", solve_use_s0,
                  "start from the instance's bundled initial support");
  solve->add_flag("--strict", solve_strict,
                  "theoretical progress condition, no early stopping");
  solve->add_option("--out", solve_out, "output path ('-' for stdout)");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "sparsity-vs-loss benchmark");
  ProblemOptions sweep_problem;
  add_problem_flags(sweep, &sweep_problem);
  std::vector<std::string> sweep_algos;
  std::vector<int> sweep_grid;
  SolverConfig sweep_cfg;
  std::string sweep_format = "csv", sweep_out = "-";
  bool sweep_strict = false;
  sweep->add_option("--algo", sweep_algos,
                    "algorithms to run (default: all)");
  sweep->add_option("--sparsity", sweep_grid, "sparsity grid")->required();
  sweep->add_option("--eps", sweep_cfg.epsilon, "target accuracy");
  sweep->add_option("--seed", sweep_cfg.rng_seed, "master seed");
  sweep->add_option("--max-iterations", sweep_cfg.max_iterations,
                    "iteration cap");
  sweep->add_flag("--strict", sweep_strict, "theoretical progress condition");
  sweep->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_out, "output path ('-' for stdout)");

  // ---- verify ----
  auto* verify = app.add_subcommand(
      "verify", "per-step progress lemma and recovery checks");
  ProblemOptions verify_problem;
  add_problem_flags(verify, &verify_problem);
  SolverConfig verify_cfg;
  double verify_theta = 1e-3;
  std::string verify_out = "-";
  verify->add_option("--sparsity", verify_cfg.sparsity, "target sparsity")
      ->required();
  verify->add_option("--eps", verify_cfg.epsilon, "target accuracy");
  verify->add_option("--seed", verify_cfg.rng_seed, "rng seed");
  verify->add_option("--theta", verify_theta, "slack for the distance bound");
  verify->add_option("--out", verify_out, "output path ('-' for stdout)");

  // ---- constants ----
  auto* constants = app.add_subcommand(
      "constants", "restricted smoothness/convexity constants");
  ProblemOptions constants_problem;
  add_problem_flags(constants, &constants_problem);
  int constants_level = 2;
  int constants_samples = 0;
  std::uint64_t constants_seed = 0;
  std::string constants_out = "-";
  constants->add_option("--level", constants_level, "support size s")
      ->required();
  constants->add_option("--samples", constants_samples,
                        "sample this many supports instead of enumerating");
  constants->add_option("--seed", constants_seed, "sampling seed");
  constants->add_option("--out", constants_out, "output path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    PlantedInstance inst =
        gen_kind == "adversarial"
            ? ompr_adversarial(gen_s_star, static_cast<int>(gen_kappa),
                               gen_delta)
            : gaussian_planted(gen_m, gen_n, gen_s_star, gen_noise, gen_seed);
    if (gen_out == "-") {
      std::cout << instance_to_json(inst) << "\n";
    } else {
      save_instance(inst, gen_out);
      json info;
      info["written"] = gen_out;
      info["kind"] = inst.kind;
      info["rows"] = inst.a.rows();
      info["cols"] = inst.a.cols();
      info["s_star"] = inst.s_star;
      std::cout << info.dump(2) << "\n";
    }
    return 0;
  }

  if (solve->parsed()) {
    LoadedProblem prob = load_problem(solve_problem);
    solve_cfg.pinned = prob.pinned;
    solve_cfg.literal_init = solve_literal;
    solve_cfg.strict = solve_strict;
    if (solve_run_exactly_t > 0) {
      solve_cfg.run_exactly_t = true;
      solve_cfg.max_iterations = solve_run_exactly_t;
    }
    if (solve_use_s0) {
      if (!prob.instance)
        throw std::invalid_argument("--instance-s0 requires --instance");
      solve_cfg.initial_support = prob.instance->initial_support;
    }
    const SolverReport rep =
        run_algorithm(*prob.objective, parse_algorithm(solve_algo), solve_cfg);
    json out = report_summary(*prob.objective, rep, solve_algo, solve_cfg);
    if (prob.instance) {
      const double target = prob.objective->value(prob.instance->x_star);
      out["target_loss"] = target;
      out["gap"] = prob.objective->value(rep.solution) - target;
    }
    write_text(solve_out, out.dump(2) + "\n");
    return 0;
  }

  if (sweep->parsed()) {
    if (!sweep_problem.instance_path.empty())
      throw std::invalid_argument("sweep runs on --data CSV input");
    CsvSchema schema;
    schema.label_column = sweep_problem.label_column;
    if (schema.label_column.empty())
      throw std::invalid_argument("--label is required with --data");
    schema.task = parse_task(sweep_problem.task);
    schema.categorical_columns = sweep_problem.categorical;
    const Dataset ds = preprocess(load_csv(sweep_problem.data_path, schema),
                                  sweep_problem.for_arht_embedding);
    sweep_cfg.strict = sweep_strict;
    std::vector<Algorithm> algos;
    if (sweep_algos.empty()) {
      algos = all_algorithms();
    } else {
      for (const auto& name : sweep_algos) algos.push_back(parse_algorithm(name));
    }
    const std::vector<SweepRecord> records =
        run_sweep(ds, algos, sweep_grid, sweep_cfg);
    emit_results(records, sweep_format, sweep_out);
    return 0;
  }

  if (verify->parsed()) {
    LoadedProblem prob = load_problem(verify_problem);
    if (!prob.instance)
      throw std::invalid_argument("verify requires --instance input");
    const PlantedInstance& inst = *prob.instance;
    const ObjectiveOracle& f = *prob.objective;
    const LeastSquaresObjective ls(inst.a, inst.b);

    const int level =
        std::min(verify_cfg.sparsity + inst.s_star, static_cast<int>(inst.a.cols()));
    const RestrictedConstants consts =
        brute_force_restricted_constants(ls, level);

    SolverConfig run_cfg = verify_cfg;
    json steps = json::array();
    bool all_passed = true;
    const SolverReport rep = ompr(f, run_cfg);
    // Replay the committed OMPR path (default OMP warm start) and check the
    // per-step contraction from each pre-commit state.
    SupportSet current = omp(f, run_cfg).support;
    DenseVector x = f.restricted_minimize(current, run_cfg.inner_tol).x;
    for (const auto& recd : rep.trace) {
      if (current.size() >= f.dim()) break;
      std::string detail;
      const bool ok = verify_ompr_progress(f, x, current, inst.x_star, consts,
                                           run_cfg.inner_tol, &detail);
      steps.push_back({{"iteration", recd.iteration},
                       {"passed", ok},
                       {"detail", detail}});
      all_passed = all_passed && ok;
      current = recd.support;
      x = f.restricted_minimize(current, run_cfg.inner_tol).x;
    }

    const RecoveryAssessment recovery = check_solution_recovery(
        f, rep.solution, inst.x_star, consts.rho_minus, verify_cfg.epsilon,
        verify_theta);
    const RecoveryAssessment support = check_support_recovery(
        rep.solution, inst.x_star, recovery.zeta, consts.rho_minus);

    json out;
    out["constants"] = {{"level", consts.level},
                        {"rho_plus", consts.rho_plus},
                        {"rho_minus", consts.rho_minus},
                        {"rho2_plus", consts.rho2_plus},
                        {"kappa", consts.kappa},
                        {"kappa_tilde", consts.kappa_tilde},
                        {"delta", consts.delta},
                        {"method", consts.method}};
    out["progress_steps"] = std::move(steps);
    out["progress_all_passed"] = all_passed;
    out["solution_recovery"] = {{"distance", recovery.distance},
                                {"zeta", recovery.zeta},
                                {"bound", recovery.bound},
                                {"bound_holds", recovery.bound_holds}};
    out["support_recovery"] = {
        {"condition_satisfied", support.condition_satisfied},
        {"support_recovered", support.support_recovered}};
    write_text(verify_out, out.dump(2) + "\n");
    return all_passed ? 0 : 1;
  }

  if (constants->parsed()) {
    LoadedProblem prob = load_problem(constants_problem);
    const auto* ls = dynamic_cast<const LeastSquaresObjective*>(
        prob.objective.get());
    if (!ls)
      throw std::invalid_argument(
          "constants requires a least-squares problem (instance or regression data)");
    const RestrictedConstants consts =
        constants_samples > 0
            ? sampled_restricted_constants(*ls, constants_level,
                                           constants_samples, constants_seed)
            : brute_force_restricted_constants(*ls, constants_level);
    json out;
    out["level"] = consts.level;
    out["rho_plus"] = consts.rho_plus;
    out["rho_minus"] = consts.rho_minus;
    out["rho2_plus"] = consts.rho2_plus;
    out["kappa"] = consts.kappa;
    out["kappa_tilde"] = consts.kappa_tilde;
    out["delta"] = consts.delta;
    out["method"] = consts.method;
    write_text(constants_out, out.dump(2) + "\n");
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
