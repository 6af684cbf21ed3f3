#include "sparseopt/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace sparseopt {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sanitize_flag(std::string flag) {
  for (char& c : flag)
    if (c == ',' || c == '|' || c == '\n') c = ';';
  return flag;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out += '|';
    out += sanitize_flag(flags[i]);
  }
  return out;
}

std::vector<std::string> split_flags(const std::string& joined) {
  std::vector<std::string> out;
  if (joined.empty()) return out;
  std::istringstream ss(joined);
  std::string item;
  while (std::getline(ss, item, '|')) out.push_back(item);
  return out;
}

}  // namespace

const char* algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kIht:
      return "iht";
    case Algorithm::kOmp:
      return "omp";
    case Algorithm::kOmpr:
      return "ompr";
    case Algorithm::kEls:
      return "els";
    case Algorithm::kArht:
      return "arht";
    case Algorithm::kLasso:
      return "lasso";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm algo : all_algorithms())
    if (name == algorithm_name(algo)) return algo;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected iht, omp, ompr, els, arht, lasso)");
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::kIht,  Algorithm::kOmp,  Algorithm::kOmpr,
          Algorithm::kEls,  Algorithm::kArht, Algorithm::kLasso};
}

SolverReport run_algorithm(const ObjectiveOracle& f, Algorithm algo,
                           const SolverConfig& cfg) {
  switch (algo) {
    case Algorithm::kIht:
      return iht(f, cfg);
    case Algorithm::kOmp:
      return omp(f, cfg);
    case Algorithm::kOmpr:
      return ompr(f, cfg);
    case Algorithm::kEls:
      return exhaustive_local_search(f, cfg);
    case Algorithm::kArht:
      return arht(f, cfg);
    case Algorithm::kLasso:
      return lasso_path(f, cfg);
  }
  throw std::invalid_argument("unknown algorithm id");
}

std::vector<SweepRecord> run_sweep(const Dataset& ds,
                                   const std::vector<Algorithm>& algorithms,
                                   const std::vector<int>& sparsity_grid,
                                   const SolverConfig& cfg) {
  const std::unique_ptr<ObjectiveOracle> f = make_objective(ds);
  const int n = f->dim();
  for (int k : sparsity_grid)
    if (k < 1 || k > n)
      throw std::invalid_argument("sparsity grid value out of range [1, n]");

  std::vector<SweepRecord> records;
  for (int k : sparsity_grid) {
    SolverConfig cell_base = cfg;
    cell_base.sparsity = k;
    cell_base.pinned = ds.intercept_index;
    cell_base.initial_support.reset();

    // One OMP warm start per sparsity level, shared by the replacement
    // solvers.
    std::optional<SupportSet> warm;
    {
      SolverConfig warm_cfg = cell_base;
      warm_cfg.rng_seed = mix_seed(cfg.rng_seed, 7777ULL + k);
      try {
        warm = omp(*f, warm_cfg).support;
      } catch (const std::exception&) {
        warm.reset();
      }
    }

    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      const Algorithm algo = algorithms[a];
      SweepRecord rec;
      rec.dataset = ds.name;
      rec.algorithm = algorithm_name(algo);
      rec.sparsity = k;
      rec.seed = mix_seed(cfg.rng_seed, 1000ULL * (a + 1) + k);

      SolverConfig cell = cell_base;
      cell.rng_seed = rec.seed;
      if (warm && (algo == Algorithm::kOmpr || algo == Algorithm::kEls ||
                   algo == Algorithm::kArht))
        cell.initial_support = warm;

      const auto start = std::chrono::steady_clock::now();
      try {
        const SolverReport report = run_algorithm(*f, algo, cell);
        rec.loss = f->value(report.solution);
        rec.flags = report.flags;
      } catch (const std::exception& e) {
        rec.loss = std::numeric_limits<double>::quiet_NaN();
        rec.flags.push_back(sanitize_flag(std::string("error:") + e.what()));
      }
      const auto stop = std::chrono::steady_clock::now();
      rec.wall_time_ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(stop - start)
              .count();
      records.push_back(std::move(rec));
    }
  }
  std::sort(records.begin(), records.end(),
            [](const SweepRecord& x, const SweepRecord& y) {
              return std::tie(x.dataset, x.algorithm, x.sparsity, x.seed) <
                     std::tie(y.dataset, y.algorithm, y.sparsity, y.seed);
            });
  return records;
}

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::string out = "dataset,algorithm,sparsity,loss,wall_time_ms,seed,flags\n";
  for (const auto& r : records) {
    out += r.dataset;
    out += ',';
    out += r.algorithm;
    out += ',';
    out += std::to_string(r.sparsity);
    out += ',';
    out += format_double(r.loss);
    out += ',';
    out += std::to_string(r.wall_time_ms);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += join_flags(r.flags);
    out += '\n';
  }
  return out;
}

std::string records_to_json(const std::vector<SweepRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json item;
    item["dataset"] = r.dataset;
    item["algorithm"] = r.algorithm;
    item["sparsity"] = r.sparsity;
    item["loss"] = r.loss;
    item["wall_time_ms"] = r.wall_time_ms;
    item["seed"] = r.seed;
    item["flags"] = r.flags;
    arr.push_back(std::move(item));
  }
  return arr.dump(2);
}

std::vector<SweepRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty sweep csv");
  if (line != "dataset,algorithm,sparsity,loss,wall_time_ms,seed,flags")
    throw std::invalid_argument("unexpected sweep csv header: " + line);
  std::vector<SweepRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (cells.size() != 7) {
      std::ostringstream msg;
      msg << "sweep csv row " << line_no << " has " << cells.size()
          << " cells, expected 7";
      throw std::invalid_argument(msg.str());
    }
    SweepRecord r;
    r.dataset = cells[0];
    r.algorithm = cells[1];
    r.sparsity = std::stoi(cells[2]);
    r.loss = std::strtod(cells[3].c_str(), nullptr);
    r.wall_time_ms = std::stoll(cells[4]);
    r.seed = std::stoull(cells[5]);
    r.flags = split_flags(cells[6]);
    records.push_back(std::move(r));
  }
  return records;
}

void emit_results(const std::vector<SweepRecord>& records,
                  const std::string& format, const std::string& path) {
  std::string payload;
  if (format == "csv") {
    payload = records_to_csv(records);
  } else if (format == "json") {
    payload = records_to_json(records) + "\n";
  } else {
    throw std::invalid_argument("unknown format '" + format +
                                "' (expected csv or json)");
  }
  if (path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << payload;
}

}  // namespace sparseopt
