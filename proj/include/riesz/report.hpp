#pragma once

// JSON rendering of verification results and the end-to-end verify run
// behind the CLI's `verify` subcommand.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <string>
#include <vector>

#include "json.hpp"
#include "riesz/io.hpp"
#include "riesz/sampler.hpp"
#include "riesz/verify.hpp"

namespace riesz::report {

using nlohmann::json;

inline json to_json(const LaplaceCheckReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"theta", io::matrix_to_json(p.theta)},
                   {"empirical", p.empirical},
                   {"analytic", p.analytic},
                   {"std_error", p.std_error},
                   {"z_score", p.z_score},
                   {"pass", p.pass}});
  }
  return {{"analytic_shape", r.analytic_shape.values()}, {"z_max", r.z_max}, {"points", pts}, {"pass", r.pass}};
}

inline double max_abs_z(const LaplaceCheckReport& r) {
  double z = 0.0;
  for (const auto& p : r.points) z = std::max(z, std::abs(p.z_score));
  return z;
}

inline json to_json(const MomentReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"i", e.i},
                       {"j", e.j},
                       {"mean", e.mean},
                       {"expected", e.expected},
                       {"std_error", e.std_error},
                       {"z_score", e.z_score},
                       {"pass", e.pass}});
  }
  json out{{"z_max", r.z_max}, {"entries", entries}, {"pass", r.pass}};
  if (!r.message.empty()) out["message"] = r.message;
  return out;
}

inline json record(const std::string& name, json inputs, double statistic, double threshold, bool pass,
                   json details = nullptr) {
  json out{{"name", name},
           {"inputs", std::move(inputs)},
           {"statistic", statistic},
           {"threshold", threshold},
           {"pass", pass}};
  if (!details.is_null()) out["details"] = std::move(details);
  return out;
}

inline json skipped(const std::string& name, const std::string& reason) {
  return {{"name", name}, {"skipped", true}, {"reason", reason}, {"pass", true}};
}

struct VerifyConfig {
  std::vector<int> counts;
  std::size_t count = 100000;
  std::uint64_t seed = 0;
  double z_max = kDefaultZMax;
  double ks_alpha = 0.01;
  unsigned workers = default_workers();
  bool deterministic = false;
  bool laplace = true;
  bool moments = true;
  bool marginals = true;
  bool density = true;
  bool blocks = true;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Runs every enabled check and assembles the report document. The output
// depends on the config but never on the worker count.
inline json run_verify(const VerifyConfig& cfg) {
  const StaircasePattern pattern = compute_boundaries(cfg.counts);
  const Index r = pattern.order();
  const json base_inputs{{"pattern", io::pattern_to_json(pattern)}, {"count", cfg.count}, {"seed", cfg.seed}};
  json checks = json::array();

  LaplaceCheckOptions lopt;
  lopt.z_max = cfg.z_max;
  lopt.workers = cfg.workers;

  const SampleBatch batch = sample_riesz_identity(pattern, cfg.count, cfg.seed, cfg.workers);

  if (cfg.laplace) {
    const RieszParams params = validate_riesz(pattern.shape(), SymMatrix::scaled_identity(r, 0.5));
    const auto rep = laplace_check_samples(batch.matrices, params, default_theta_grid(r, cfg.seed), cfg.z_max);
    checks.push_back(record("laplace", base_inputs, max_abs_z(rep), cfg.z_max, rep.pass, to_json(rep)));
  }
  if (cfg.moments) {
    const auto rep = moment_check(batch, cfg.z_max);
    double zmax = 0.0;
    for (const auto& e : rep.entries) zmax = std::max(zmax, std::abs(e.z_score));
    checks.push_back(record("moments", base_inputs, zmax, cfg.z_max, rep.pass, to_json(rep)));
  }
  if (cfg.marginals) {
    if (cfg.count < kMinKsSamples) {
      checks.push_back(skipped("marginal_ks", "needs at least 1000 samples"));
    } else {
      for (Index i = 1; i <= r; ++i) {
        const auto ks = marginal_ks_check(batch, i);
        json inputs = base_inputs;
        inputs["index"] = i;
        inputs["dof"] = pattern.counts()[static_cast<std::size_t>(i - 1)];
        checks.push_back(record("marginal_ks", inputs, ks.p_value, cfg.ks_alpha, ks.p_value > cfg.ks_alpha,
                                json{{"ks_statistic", ks.statistic}}));
      }
    }
  }
  if (cfg.density) {
    const PowerExponent shape = pattern.shape();
    if (r > 2) {
      checks.push_back(skipped("density_normalization", "quadrature is limited to r <= 2"));
    } else if (!is_absolutely_continuous(shape)) {
      checks.push_back(skipped("density_normalization", "shape is in the singular regime"));
    } else {
      const auto q = density_normalization(validate_riesz(shape, SymMatrix::scaled_identity(r, 0.5)));
      checks.push_back(record("density_normalization", json{{"s", shape.values()}, {"sigma", "I/2"}},
                              std::abs(q.integral - 1.0),
                              std::max(kNormalizationTolerance, 10.0 * q.abs_error_estimate), q.pass,
                              json{{"integral", q.integral}, {"abs_error_estimate", q.abs_error_estimate}}));
    }
  }
  if (cfg.blocks) {
    const auto rep = block_recursion_check(pattern, cfg.count, cfg.seed, lopt);
    if (rep.skipped) {
      checks.push_back(skipped("block_recursion", "single-block pattern; covered by the laplace check"));
    } else {
      for (const auto& lvl : rep.levels) {
        json inputs = base_inputs;
        inputs["level"] = lvl.level;
        inputs["order"] = lvl.order;
        checks.push_back(record("block_recursion", inputs, max_abs_z(lvl.report), cfg.z_max, lvl.report.pass,
                                to_json(lvl.report)));
      }
    }
  }

  bool pass = true;
  for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
  json doc{{"tool", "riesz verify"},
           {"checks", checks},
           {"pass", pass},
           {"metadata",
            {{"note", "thresholds are engineering choices, not values taken from a published experiment"},
             {"z_max", cfg.z_max},
             {"ks_alpha", cfg.ks_alpha},
             {"normalization_tolerance", kNormalizationTolerance}}}};
  if (!cfg.deterministic) doc["timestamp"] = utc_timestamp();
  return doc;
}

}  // namespace riesz::report
