#pragma once

// Tabular data with missing entries -> staircase pattern and zero-imputed
// Gram matrix. Rows are observations, columns are the r components.

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/errors.hpp"
#include "riesz/sampler.hpp"
#include "riesz/sym_matrix.hpp"

namespace riesz {

struct MaskedTable {
  Eigen::MatrixXd values;                                     // n_rows x n_cols
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;    // true = observed

  Index n_rows() const noexcept { return values.rows(); }
  Index n_cols() const noexcept { return values.cols(); }

  int observed_in_column(Index j) const { return static_cast<int>(mask.col(j).count()); }
};

struct MonotoneDecision {
  bool monotone = false;
  std::vector<int> counts;        // valid when monotone
  std::size_t witness_row = 0;    // 1-based; 0 when not row-specific
  std::size_t witness_column = 0; // 1-based
};

// Monotone iff every row misses a (possibly empty) prefix of the columns and
// the first column is observed at least once.
inline MonotoneDecision detect_monotone(const MaskedTable& table) {
  if (table.n_rows() < 1) throw ArgumentError("table has no rows");
  MonotoneDecision out;
  for (Index i = 0; i < table.n_rows(); ++i) {
    Index j = 0;
    while (j < table.n_cols() && !table.mask(i, j)) ++j;
    for (; j < table.n_cols(); ++j) {
      if (!table.mask(i, j)) {
        out.witness_row = static_cast<std::size_t>(i + 1);
        out.witness_column = static_cast<std::size_t>(j + 1);
        return out;
      }
    }
  }
  out.counts.resize(static_cast<std::size_t>(table.n_cols()));
  for (Index j = 0; j < table.n_cols(); ++j) {
    out.counts[static_cast<std::size_t>(j)] = table.observed_in_column(j);
  }
  if (out.counts.front() == 0) {
    out.counts.clear();
    out.witness_column = 1;
    return out;
  }
  out.monotone = true;
  return out;
}

inline MaskedTable permute_columns(const MaskedTable& table, const std::vector<Index>& perm) {
  MaskedTable out{Eigen::MatrixXd(table.n_rows(), table.n_cols()),
                  decltype(table.mask)(table.n_rows(), table.n_cols())};
  for (Index k = 0; k < table.n_cols(); ++k) {
    out.values.col(k) = table.values.col(perm[static_cast<std::size_t>(k)]);
    out.mask.col(k) = table.mask.col(perm[static_cast<std::size_t>(k)]);
  }
  return out;
}

struct Reordering {
  std::vector<Index> permutation;  // new column k holds original column permutation[k] (0-based)
  MaskedTable table;
};

// A column observed less often must come earlier in any staircase order, so
// sorting by observed count (stable) finds an ordering whenever one exists.
inline std::optional<Reordering> reorder_for_monotonicity(const MaskedTable& table) {
  std::vector<Index> perm(static_cast<std::size_t>(table.n_cols()));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::stable_sort(perm.begin(), perm.end(), [&](Index a, Index b) {
    return table.observed_in_column(a) < table.observed_in_column(b);
  });
  MaskedTable permuted = permute_columns(table, perm);
  if (!detect_monotone(permuted).monotone) return std::nullopt;
  return Reordering{std::move(perm), std::move(permuted)};
}

// U = table^T with missing entries set to 0; returns U U^T.
inline SymMatrix gram_zero_imputed(const MaskedTable& table) {
  const MonotoneDecision d = detect_monotone(table);
  if (!d.monotone) {
    throw PatternError(d.witness_row,
                       "table is not monotone (row " + std::to_string(d.witness_row) + ", column " +
                           std::to_string(d.witness_column) +
                           "); try reordering the columns for monotonicity");
  }
  const Eigen::MatrixXd u = table.mask.select(table.values, 0.0).transpose();
  return SymMatrix::gram(u);
}

// Observation table implied by a staircase matrix: row j of the table is
// column j of U, component i observed iff j < s_i.
inline MaskedTable table_from_staircase(const StaircasePattern& pattern, const Eigen::MatrixXd& u) {
  const Index r = pattern.order();
  const Index n = pattern.max_count();
  if (u.rows() != r || u.cols() != n) throw ArgumentError("staircase matrix has the wrong shape");
  MaskedTable t{u.transpose(), decltype(MaskedTable::mask)(n, r)};
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < r; ++i) t.mask(j, i) = j < pattern.counts()[static_cast<std::size_t>(i)];
  return t;
}

// Columns whose observed mean exceeds 3 * std / sqrt(count); the zero-mean
// assumption looks doubtful there. 1-based column indices.
inline std::vector<std::size_t> centering_warnings(const MaskedTable& table) {
  std::vector<std::size_t> out;
  for (Index j = 0; j < table.n_cols(); ++j) {
    const int n = table.observed_in_column(j);
    if (n < 2) continue;
    double sum = 0.0;
    for (Index i = 0; i < table.n_rows(); ++i)
      if (table.mask(i, j)) sum += table.values(i, j);
    const double mean = sum / n;
    double ss = 0.0;
    for (Index i = 0; i < table.n_rows(); ++i)
      if (table.mask(i, j)) ss += (table.values(i, j) - mean) * (table.values(i, j) - mean);
    const double sd = std::sqrt(ss / (n - 1));
    if (std::abs(mean) > 3.0 * sd / std::sqrt(static_cast<double>(n))) {
      out.push_back(static_cast<std::size_t>(j + 1));
    }
  }
  return out;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool is_missing_marker(const std::string& field) {
  std::string lower;
  for (char c : field) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower.empty() || lower == "na" || lower == "nan";
}

inline std::optional<double> parse_number(const std::string& field) {
  if (field.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

// CSV with an optional header row. Empty fields, NA and NaN (any case) are
// missing. A first row containing any other non-numeric field is a header.
inline MaskedTable read_masked_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    rows.push_back(detail::split_csv_line(line));
  }
  if (rows.empty()) throw ParseError("CSV input has no rows");
  std::size_t first = 0;
  for (const auto& f : rows.front()) {
    if (!detail::is_missing_marker(f) && !detail::parse_number(f)) {
      first = 1;
      break;
    }
  }
  if (first >= rows.size()) throw ParseError("CSV input has a header but no data");
  const std::size_t cols = rows[first].size();
  const auto n = static_cast<Index>(rows.size() - first);
  MaskedTable t{Eigen::MatrixXd::Zero(n, static_cast<Index>(cols)),
                decltype(MaskedTable::mask)::Constant(n, static_cast<Index>(cols), false)};
  for (std::size_t i = first; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ParseError("CSV line " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                       " fields, expected " + std::to_string(cols));
    }
    const auto row = static_cast<Index>(i - first);
    for (std::size_t j = 0; j < cols; ++j) {
      const std::string& f = rows[i][j];
      if (detail::is_missing_marker(f)) continue;
      const auto v = detail::parse_number(f);
      if (!v) throw ParseError("CSV line " + std::to_string(i + 1) + ": bad value '" + f + "'");
      t.values(row, static_cast<Index>(j)) = *v;
      t.mask(row, static_cast<Index>(j)) = true;
    }
  }
  return t;
}

inline void write_masked_csv(std::ostream& out, const MaskedTable& table) {
  for (Index j = 0; j < table.n_cols(); ++j) out << (j ? "," : "") << "u" << (j + 1);
  out << '\n';
  for (Index i = 0; i < table.n_rows(); ++i) {
    for (Index j = 0; j < table.n_cols(); ++j) {
      if (j) out << ',';
      out << (table.mask(i, j) ? format_double(table.values(i, j)) : std::string("NA"));
    }
    out << '\n';
  }
}

}  // namespace riesz
