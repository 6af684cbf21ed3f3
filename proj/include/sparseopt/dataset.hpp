#pragma once

#include "sparseopt/core.hpp"
#include "sparseopt/objectives.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sparseopt {

enum class TaskKind { kRegression, kBinary };

const char* task_name(TaskKind task);
TaskKind parse_task(const std::string& name);

struct CsvSchema {
  std::string label_column;
  TaskKind task = TaskKind::kRegression;
  // Columns to one-hot encode; any other non-numeric cell is an error.
  std::vector<std::string> categorical_columns;
};

struct Dataset {
  DenseMatrix a;
  DenseVector b;
  TaskKind task = TaskKind::kRegression;
  std::vector<std::string> feature_names;
  std::optional<int> intercept_index;
  std::string name;
  std::vector<std::string> notes;

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
};

// Parses a headed comma-separated file. Rows with missing cells (empty, NA,
// NaN, ?) are dropped with a note; non-numeric cells outside the declared
// categorical columns raise an error naming the row and column.
Dataset load_csv(const std::string& path, const CsvSchema& schema);
Dataset parse_csv_text(const std::string& text, const CsvSchema& schema,
                       const std::string& name);

// Drops all-zero columns, appends an all-ones intercept column, and scales
// every column to unit l2 norm. With for_arht, additionally appends an
// identity block with zero targets so the design becomes (m + n') x n'.
Dataset preprocess(const Dataset& ds, bool for_arht);

// Least-squares oracle for regression tasks, logistic for binary ones.
std::unique_ptr<ObjectiveOracle> make_objective(const Dataset& ds);

}  // namespace sparseopt
