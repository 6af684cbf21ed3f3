#include "sparseopt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sparseopt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool is_missing(const std::string& cell) {
  if (cell.empty()) return true;
  std::string low = cell;
  std::transform(low.begin(), low.end(), low.begin(), ::tolower);
  return low == "na" || low == "nan" || low == "?";
}

bool parse_number(const std::string& cell, double* out) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') return false;
  *out = v;
  return true;
}

}  // namespace

const char* task_name(TaskKind task) {
  return task == TaskKind::kRegression ? "regression" : "binary";
}

TaskKind parse_task(const std::string& name) {
  if (name == "regression") return TaskKind::kRegression;
  if (name == "binary") return TaskKind::kBinary;
  throw std::invalid_argument("unknown task '" + name +
                              "' (expected regression or binary)");
}

Dataset parse_csv_text(const std::string& text, const CsvSchema& schema,
                       const std::string& name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument(name + ": empty file");
  const std::vector<std::string> header = split_row(line);
  const int num_cols = static_cast<int>(header.size());

  int label_col = -1;
  for (int c = 0; c < num_cols; ++c)
    if (header[c] == schema.label_column) label_col = c;
  if (label_col < 0)
    throw std::invalid_argument(name + ": label column '" +
                                schema.label_column + "' not found in header");

  std::vector<bool> categorical(num_cols, false);
  for (const auto& cat : schema.categorical_columns) {
    bool found = false;
    for (int c = 0; c < num_cols; ++c)
      if (header[c] == cat) {
        if (c == label_col)
          throw std::invalid_argument(
              name + ": label column cannot be categorical");
        categorical[c] = true;
        found = true;
      }
    if (!found)
      throw std::invalid_argument(name + ": categorical column '" + cat +
                                  "' not found in header");
  }

  Dataset ds;
  ds.name = name;
  ds.task = schema.task;

  struct Row {
    std::vector<double> numeric;        // numeric feature cells, in order
    std::vector<std::string> category;  // categorical cells, in order
    double label = 0.0;
  };
  std::vector<Row> rows;
  // Distinct values per categorical column, sorted for a stable encoding.
  std::vector<std::map<std::string, int>> levels(num_cols);

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (static_cast<int>(cells.size()) != num_cols) {
      std::ostringstream msg;
      msg << name << ": row " << line_no << " has " << cells.size()
          << " cells, expected " << num_cols;
      throw std::invalid_argument(msg.str());
    }
    bool missing = false;
    for (int c = 0; c < num_cols && !missing; ++c)
      if (is_missing(cells[c])) {
        std::ostringstream msg;
        msg << "dropped row " << line_no << ": missing value in column '"
            << header[c] << "'";
        ds.notes.push_back(msg.str());
        missing = true;
      }
    if (missing) continue;

    Row row;
    for (int c = 0; c < num_cols; ++c) {
      if (c == label_col || categorical[c]) continue;
      double v;
      if (!parse_number(cells[c], &v)) {
        std::ostringstream msg;
        msg << name << ": row " << line_no << ", column '" << header[c]
            << "': non-numeric value '" << cells[c] << "'";
        throw std::invalid_argument(msg.str());
      }
      row.numeric.push_back(v);
    }
    for (int c = 0; c < num_cols; ++c)
      if (categorical[c]) {
        row.category.push_back(cells[c]);
        levels[c].emplace(cells[c], 0);
      }
    double label;
    if (!parse_number(cells[label_col], &label)) {
      std::ostringstream msg;
      msg << name << ": row " << line_no << ", column '" << header[label_col]
          << "': non-numeric label '" << cells[label_col] << "'";
      throw std::invalid_argument(msg.str());
    }
    if (schema.task == TaskKind::kBinary && label != 0.0 && label != 1.0) {
      std::ostringstream msg;
      msg << name << ": row " << line_no << ": binary label must be 0 or 1, got "
          << cells[label_col];
      throw std::invalid_argument(msg.str());
    }
    row.label = label;
    rows.push_back(std::move(row));
  }

  // Assign one-hot offsets per categorical level (sorted by value).
  int width = 0;
  for (int c = 0; c < num_cols; ++c) {
    if (c == label_col) continue;
    if (!categorical[c]) {
      ds.feature_names.push_back(header[c]);
      ++width;
    } else {
      for (auto& [value, offset] : levels[c]) {
        offset = width++;
        ds.feature_names.push_back(header[c] + "=" + value);
      }
    }
  }

  const int m = static_cast<int>(rows.size());
  ds.a = DenseMatrix::Zero(m, width);
  ds.b = DenseVector::Zero(m);
  for (int r = 0; r < m; ++r) {
    int numeric_at = 0;
    int category_at = 0;
    int col = 0;
    for (int c = 0; c < num_cols; ++c) {
      if (c == label_col) continue;
      if (!categorical[c]) {
        ds.a(r, col++) = rows[r].numeric[numeric_at++];
      } else {
        ds.a(r, levels[c].at(rows[r].category[category_at++])) = 1.0;
        col += static_cast<int>(levels[c].size());
      }
    }
    ds.b[r] = rows[r].label;
  }
  return ds;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  return parse_csv_text(buffer.str(), schema, name);
}

Dataset preprocess(const Dataset& ds, bool for_arht) {
  const int m = ds.rows();
  Dataset out;
  out.task = ds.task;
  out.name = ds.name;
  out.notes = ds.notes;
  out.b = ds.b;

  std::vector<int> kept;
  for (int c = 0; c < ds.cols(); ++c) {
    if (ds.a.col(c).norm() <= kZeroTol) {
      const std::string label = c < static_cast<int>(ds.feature_names.size())
                                    ? ds.feature_names[c]
                                    : std::to_string(c);
      out.notes.push_back("dropped zero column '" + label + "'");
    } else {
      kept.push_back(c);
    }
  }

  const int n = static_cast<int>(kept.size()) + 1;
  out.a = DenseMatrix::Zero(m, n);
  for (int j = 0; j < static_cast<int>(kept.size()); ++j) {
    out.a.col(j) = ds.a.col(kept[j]);
    out.feature_names.push_back(kept[j] <
                                        static_cast<int>(ds.feature_names.size())
                                    ? ds.feature_names[kept[j]]
                                    : std::to_string(kept[j]));
  }
  out.a.col(n - 1).setOnes();
  out.feature_names.push_back("intercept");
  out.intercept_index = n - 1;

  for (int j = 0; j < n; ++j) out.a.col(j) /= out.a.col(j).norm();

  if (for_arht) {
    DenseMatrix augmented(m + n, n);
    augmented.topRows(m) = out.a;
    augmented.bottomRows(n) = DenseMatrix::Identity(n, n);
    DenseVector targets = DenseVector::Zero(m + n);
    targets.head(m) = out.b;
    out.a = std::move(augmented);
    out.b = std::move(targets);
    out.notes.push_back("appended identity regularization block");
  }
  return out;
}

std::unique_ptr<ObjectiveOracle> make_objective(const Dataset& ds) {
  if (ds.task == TaskKind::kBinary)
    return std::make_unique<LogisticObjective>(ds.a, ds.b);
  return std::make_unique<LeastSquaresObjective>(ds.a, ds.b);
}

}  // namespace sparseopt
