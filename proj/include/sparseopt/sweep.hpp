#pragma once

#include "sparseopt/core.hpp"
#include "sparseopt/dataset.hpp"
#include "sparseopt/solvers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sparseopt {

enum class Algorithm { kIht, kOmp, kOmpr, kEls, kArht, kLasso };

const char* algorithm_name(Algorithm algo);
Algorithm parse_algorithm(const std::string& name);
std::vector<Algorithm> all_algorithms();

struct SweepRecord {
  std::string dataset;
  std::string algorithm;
  int sparsity = 0;
  double loss = 0.0;
  std::int64_t wall_time_ms = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> flags;

  bool operator==(const SweepRecord& other) const = default;
};

// Runs every (algorithm, sparsity) cell. Replacement solvers share the OMP
// warm start of the same sparsity; per-cell seeds derive from cfg.rng_seed;
// cell failures become `error:` flags instead of aborting the sweep. The
// dataset's intercept column, when present, is pinned into every support.
std::vector<SweepRecord> run_sweep(const Dataset& ds,
                                   const std::vector<Algorithm>& algorithms,
                                   const std::vector<int>& sparsity_grid,
                                   const SolverConfig& cfg);

// Run a single cell; exposed for the CLI `solve` subcommand.
SolverReport run_algorithm(const ObjectiveOracle& f, Algorithm algo,
                           const SolverConfig& cfg);

std::string records_to_csv(const std::vector<SweepRecord>& records);
std::string records_to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_csv(const std::string& text);

// format: "csv" or "json"; path "-" writes to stdout.
void emit_results(const std::vector<SweepRecord>& records,
                  const std::string& format, const std::string& path);

}  // namespace sparseopt
