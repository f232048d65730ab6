#pragma once

// File formats: pattern and parameter JSON, batch CSV with its JSON sidecar,
// and comma-separated numeric lists used on the command line.

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "riesz/distributions.hpp"
#include "riesz/errors.hpp"
#include "riesz/sampler.hpp"
#include "riesz/sym_matrix.hpp"

namespace riesz::io {

using nlohmann::json;

inline constexpr int kBatchFormatVersion = 1;

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    const auto* b = item.data();
    const auto* e = item.data() + item.size();
    auto res = std::from_chars(b, e, v);
    if (item.empty() || res.ec != std::errc() || res.ptr != e) {
      throw ParseError("bad integer '" + item + "' in list '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty integer list");
  return out;
}

inline std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0;
    const auto* b = item.data();
    const auto* e = item.data() + item.size();
    auto res = std::from_chars(b, e, v);
    if (item.empty() || res.ec != std::errc() || res.ptr != e) {
      throw ParseError("bad number '" + item + "' in list '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

// {"counts": [int]}
inline StaircasePattern pattern_from_json(const json& j) {
  if (!j.is_object() || !j.contains("counts") || !j["counts"].is_array()) {
    throw ParseError("pattern JSON needs a \"counts\" array");
  }
  std::vector<int> counts;
  for (const auto& c : j["counts"]) {
    if (!c.is_number_integer()) throw ParseError("pattern counts must be integers");
    counts.push_back(c.get<int>());
  }
  return compute_boundaries(counts);
}

inline json pattern_to_json(const StaircasePattern& p) { return json{{"counts", p.counts()}}; }

inline SymMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix JSON must be a non-empty array of rows");
  const auto r = static_cast<Index>(j.size());
  Eigen::MatrixXd m(r, r);
  for (Index i = 0; i < r; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != r) throw ParseError("matrix JSON is not square");
    for (Index k = 0; k < r; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw ParseError("matrix JSON entries must be numbers");
      m(i, k) = v.get<double>();
    }
  }
  try {
    return SymMatrix::from_dense(m, 1e-9);
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
}

inline json matrix_to_json(const SymMatrix& x) {
  json rows = json::array();
  for (Index i = 0; i < x.order(); ++i) {
    json row = json::array();
    for (Index k = 0; k < x.order(); ++k) row.push_back(x(i, k));
    rows.push_back(row);
  }
  return rows;
}

// {"r": int, "s": [real], "sigma": "identity" | [[real]], "convention": "natural"}
inline RieszParams params_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("parameter JSON must be an object");
  if (!j.contains("r") || !j["r"].is_number_integer()) throw ParseError("parameter JSON needs integer \"r\"");
  if (!j.contains("s") || !j["s"].is_array()) throw ParseError("parameter JSON needs array \"s\"");
  const int r = j["r"].get<int>();
  if (r < 1) throw ParseError("\"r\" must be at least 1");
  std::vector<double> s;
  for (const auto& v : j["s"]) {
    if (!v.is_number()) throw ParseError("\"s\" entries must be numbers");
    s.push_back(v.get<double>());
  }
  if (static_cast<int>(s.size()) != r) throw ParseError("\"s\" must have r entries");
  const std::string convention = j.value("convention", std::string("natural"));
  if (convention != "natural") {
    throw ParseError("unsupported convention '" + convention + "' (only \"natural\")");
  }
  SymMatrix sigma = SymMatrix::identity(r);
  if (j.contains("sigma")) {
    const auto& sj = j["sigma"];
    if (sj.is_string()) {
      if (sj.get<std::string>() != "identity") throw ParseError("\"sigma\" string must be \"identity\"");
    } else {
      sigma = matrix_from_json(sj);
      if (sigma.order() != r) throw ParseError("\"sigma\" must be r x r");
    }
  }
  return validate_riesz(PowerExponent(std::move(s)), sigma);
}

inline json params_to_json(const RieszParams& p) {
  return json{{"r", p.order()},
              {"s", p.s().values()},
              {"sigma", matrix_to_json(p.sigma())},
              {"convention", "natural"}};
}

inline void write_batch_header(std::ostream& out) { out << "sample,i,j,value\n"; }

// One row per upper-triangle entry; all indices 0-based.
inline void write_batch_rows(std::ostream& out, std::size_t sample, const SymMatrix& x) {
  for (Index i = 0; i < x.order(); ++i) {
    for (Index j = i; j < x.order(); ++j) {
      out << sample << ',' << i << ',' << j << ',' << format_double(x(i, j)) << '\n';
    }
  }
}

inline void write_batch_csv(std::ostream& out, const SampleBatch& batch) {
  write_batch_header(out);
  for (std::size_t k = 0; k < batch.matrices.size(); ++k) write_batch_rows(out, k, batch.matrices[k]);
}

inline json batch_sidecar(const StaircasePattern& pattern, std::uint64_t seed, std::size_t count) {
  return json{{"pattern", pattern_to_json(pattern)},
              {"seed", seed},
              {"count", count},
              {"format_version", kBatchFormatVersion}};
}

// Reads the batch CSV back into matrices of order r.
inline std::vector<SymMatrix> read_batch_csv(std::istream& in, Index r) {
  std::string line;
  if (!std::getline(in, line) || line != "sample,i,j,value") throw ParseError("missing batch CSV header");
  std::vector<SymMatrix> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[4];
    for (auto& field : f) {
      if (!std::getline(ss, field, ',')) throw ParseError("short batch CSV line " + std::to_string(lineno));
    }
    try {
      const std::size_t sample = std::stoull(f[0]);
      const Index i = std::stoll(f[1]);
      const Index j = std::stoll(f[2]);
      const double v = std::stod(f[3]);
      if (i < 0 || j < 0 || i >= r || j >= r) throw ParseError("index out of range");
      while (out.size() <= sample) out.emplace_back(r);
      out[sample].set(i, j, v);
    } catch (const std::logic_error&) {
      throw ParseError("bad batch CSV line " + std::to_string(lineno));
    }
  }
  return out;
}

}  // namespace riesz::io
