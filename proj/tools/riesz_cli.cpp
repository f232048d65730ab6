// riesz: sample, evaluate and verify Riesz distributions built from
// staircase missing-data Gaussian samples.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riesz/riesz.hpp"

namespace {

using riesz::io::json;

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RIESZ_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw riesz::ParseError(std::string("RIESZ_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw riesz::ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw riesz::ParseError(path + ": " + e.what());
  }
}

std::vector<riesz::SymMatrix> read_matrix_file(const std::string& path) {
  if (path == "-") return riesz::read_matrices(std::cin);
  std::ifstream in(path);
  if (!in) throw riesz::ParseError("cannot open " + path);
  return riesz::read_matrices(in);
}

// Output stream that is stdout unless a path is given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw riesz::ArgumentError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct PatternArgs {
  std::string counts;
  std::string pattern_file;

  void add(CLI::App* app) {
    app->add_option("--counts", counts, "Observation counts s_1<=...<=s_r, e.g. 2,3,5");
    app->add_option("--pattern", pattern_file, "Pattern JSON file {\"counts\": [int]}");
  }

  riesz::StaircasePattern resolve() const {
    if (!counts.empty() && !pattern_file.empty()) throw riesz::ArgumentError("give --counts or --pattern, not both");
    if (!counts.empty()) return riesz::compute_boundaries(riesz::io::parse_int_list(counts));
    if (!pattern_file.empty()) return riesz::io::pattern_from_json(read_json_file(pattern_file));
    throw riesz::ArgumentError("a pattern is required (--counts or --pattern)");
  }
};

struct ParamArgs {
  std::string params_file;
  std::string s;
  std::string sigma = "identity";

  void add(CLI::App* app) {
    app->add_option("--params", params_file,
                    "Parameter JSON {\"r\": int, \"s\": [real], \"sigma\": \"identity\" | [[real]], "
                    "\"convention\": \"natural\"}");
    app->add_option("--s", s, "Shape vector, e.g. 1,1.5");
    app->add_option("--sigma", sigma, "\"identity\" or a matrix text file")->capture_default_str();
  }

  riesz::RieszParams resolve() const {
    if (!params_file.empty()) {
      if (!s.empty()) throw riesz::ArgumentError("give --params or --s, not both");
      return riesz::io::params_from_json(read_json_file(params_file));
    }
    if (s.empty()) throw riesz::ArgumentError("parameters are required (--params or --s)");
    riesz::PowerExponent shape(riesz::io::parse_real_list(s));
    const auto r = static_cast<riesz::Index>(shape.size());
    riesz::SymMatrix sig = riesz::SymMatrix::identity(r);
    if (sigma != "identity") {
      const auto ms = read_matrix_file(sigma);
      if (ms.size() != 1) throw riesz::ParseError("sigma file must hold exactly one matrix");
      sig = ms.front();
    }
    return riesz::validate_riesz(shape, sig);
  }
};

// Evaluation points: matrix file, a diagonal, or c * I.
struct PointArgs {
  std::string file;
  std::string diag;
  std::optional<double> scalar;

  void add(CLI::App* app, const std::string& name) {
    app->add_option("--" + name, file, "Matrix text file (\"-\" for stdin), one or more matrices");
    app->add_option("--" + name + "-diag", diag, "Diagonal matrix given as a list");
    app->add_option("--" + name + "-scalar", scalar, "Multiple of the identity");
  }

  std::vector<riesz::SymMatrix> resolve(riesz::Index r) const {
    std::vector<riesz::SymMatrix> out;
    if (!file.empty()) out = read_matrix_file(file);
    if (!diag.empty()) out.push_back(riesz::SymMatrix::diagonal(riesz::io::parse_real_list(diag)));
    if (scalar) out.push_back(riesz::SymMatrix::scaled_identity(r, *scalar));
    if (out.empty()) throw riesz::ArgumentError("no evaluation points given");
    for (const auto& x : out) {
      if (x.order() != r) throw riesz::ArgumentError("evaluation point has the wrong order");
    }
    return out;
  }
};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit_values(std::ostream& out, const std::string& format, const std::string& column,
                 const std::vector<double>& values) {
  if (format == "json") {
    json pts = json::array();
    for (std::size_t k = 0; k < values.size(); ++k) pts.push_back({{"point", k}, {column, finite_or_null(values[k])}});
    out << json{{"points", pts}}.dump(2) << '\n';
    return;
  }
  out << "point," << column << '\n';
  for (std::size_t k = 0; k < values.size(); ++k) {
    out << k << ',' << (std::isfinite(values[k]) ? riesz::format_double(values[k]) : std::string("-inf")) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riesz distributions from staircase missing-data Gaussian samples"};
  app.require_subcommand(1);
  app.footer(
      "Pattern JSON: {\"counts\": [int]}. Parameter JSON: {\"r\": int, \"s\": [real], "
      "\"sigma\": \"identity\" | [[real]], \"convention\": \"natural\"}. Matrix text: a line with r, then r "
      "rows. Batch CSV: sample,i,j,value (0-based, upper triangle) plus a JSON sidecar. Default seed comes "
      "from RIESZ_SEED.");

  unsigned workers = riesz::default_workers();
  std::optional<std::uint64_t> seed_opt;

  // sample
  auto* sample = app.add_subcommand("sample", "Draw X = U U^T from a staircase pattern");
  PatternArgs sample_pattern;
  sample_pattern.add(sample);
  std::size_t sample_n = 1000;
  std::string sample_out, sample_sidecar, sample_obs;
  sample->add_option("--n", sample_n, "Number of samples")->capture_default_str();
  sample->add_option("--seed", seed_opt, "Seed");
  sample->add_option("--out", sample_out, "Batch CSV path (default stdout)");
  sample->add_option("--sidecar", sample_sidecar, "Sidecar JSON path (default <out>.json)");
  sample->add_option("--observations", sample_obs, "Write sample 0's missing-data table as CSV");
  sample->add_option("--workers", workers, "Worker threads");

  // density / laplace
  auto* density = app.add_subcommand("density", "Log density of R(s, sigma) at points");
  ParamArgs density_params;
  density_params.add(density);
  PointArgs density_points;
  density_points.add(density, "x");
  std::string density_format = "csv";
  density->add_option("--format", density_format)->check(CLI::IsMember({"csv", "json"}));

  auto* laplace = app.add_subcommand("laplace", "Log Laplace transform of R(s, sigma) at thetas");
  ParamArgs laplace_params;
  laplace_params.add(laplace);
  PointArgs laplace_points;
  laplace_points.add(laplace, "theta");
  std::string laplace_format = "csv";
  laplace->add_option("--format", laplace_format)->check(CLI::IsMember({"csv", "json"}));

  // verify
  auto* verify = app.add_subcommand("verify", "Check the sampler against the closed forms");
  PatternArgs verify_pattern;
  verify_pattern.add(verify);
  riesz::report::VerifyConfig vcfg;
  std::string verify_out, verify_skip;
  verify->add_option("--n", vcfg.count, "Number of samples")->capture_default_str();
  verify->add_option("--seed", seed_opt, "Seed");
  verify->add_option("--z-max", vcfg.z_max, "Per-point z-score bound")->capture_default_str();
  verify->add_option("--workers", workers, "Worker threads");
  verify->add_flag("--deterministic", vcfg.deterministic, "Omit the timestamp");
  verify->add_option("--out", verify_out, "Report path (default stdout)");
  verify->add_option("--skip", verify_skip, "Comma list of checks to skip: laplace,moments,marginals,density,blocks");

  // infer
  auto* infer = app.add_subcommand("infer", "Staircase pattern of a CSV table with missing entries");
  std::string infer_csv, infer_out, infer_gram;
  bool infer_reorder = false, infer_warn = false;
  infer->add_option("--csv", infer_csv, "Input CSV (\"-\" for stdin)")->required();
  infer->add_flag("--reorder", infer_reorder, "Permute columns to reach a staircase if needed");
  infer->add_option("--out", infer_out, "Pattern JSON path (default stdout)");
  infer->add_option("--gram", infer_gram, "Write the zero-imputed Gram matrix (matrix text)");
  infer->add_flag("--warn-centering", infer_warn, "Warn about columns whose mean looks nonzero");

  // gindikin
  auto* gindikin = app.add_subcommand("gindikin", "Gindikin-set membership");
  std::string gindikin_s;
  std::optional<double> gindikin_p;
  int gindikin_r = 0;
  bool include_zero = false;
  gindikin->add_option("--s", gindikin_s, "Shape vector for the Xi test");
  gindikin->add_option("--p", gindikin_p, "Scalar shape for the Lambda test");
  gindikin->add_option("--r", gindikin_r, "Matrix order for the Lambda test");
  gindikin->add_flag("--include-zero", include_zero, "Treat p = 0 as a member of Lambda");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << e.what() << '\n';
    return kExitError;
  }

  try {
    const std::uint64_t seed = seed_opt ? *seed_opt : default_seed();

    if (*sample) {
      const auto pattern = sample_pattern.resolve();
      if (sample_n < 1) throw riesz::ArgumentError("--n must be at least 1");
      Output out(sample_out);
      auto& os = out.stream();
      riesz::io::write_batch_header(os);
      riesz::stream_riesz_identity(pattern, sample_n, seed, workers,
                                   [&](std::size_t k, const riesz::SymMatrix& x) { riesz::io::write_batch_rows(os, k, x); });
      std::string sidecar = sample_sidecar;
      if (sidecar.empty() && !sample_out.empty() && sample_out != "-") sidecar = sample_out + ".json";
      if (!sidecar.empty()) {
        std::ofstream sc(sidecar);
        if (!sc) throw riesz::ArgumentError("cannot write " + sidecar);
        sc << riesz::io::batch_sidecar(pattern, seed, sample_n).dump(2) << '\n';
      }
      if (!sample_obs.empty()) {
        riesz::RngStream rng(seed, 0);
        const auto u = riesz::build_staircase_matrix(pattern, rng);
        std::ofstream obs(sample_obs);
        if (!obs) throw riesz::ArgumentError("cannot write " + sample_obs);
        riesz::write_masked_csv(obs, riesz::table_from_staircase(pattern, u));
      }
      return 0;
    }

    if (*density) {
      const auto params = density_params.resolve();
      std::vector<double> values;
      for (const auto& x : density_points.resolve(params.order())) values.push_back(riesz::riesz_log_density(params, x));
      emit_values(std::cout, density_format, "log_density", values);
      return 0;
    }

    if (*laplace) {
      const auto params = laplace_params.resolve();
      std::vector<double> values;
      for (const auto& th : laplace_points.resolve(params.order())) values.push_back(riesz::riesz_log_laplace(params, th));
      emit_values(std::cout, laplace_format, "log_laplace", values);
      return 0;
    }

    if (*verify) {
      vcfg.counts = verify_pattern.resolve().counts();
      vcfg.seed = seed;
      vcfg.workers = workers;
      if (!verify_skip.empty()) {
        std::stringstream ss(verify_skip);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (item == "laplace") vcfg.laplace = false;
          else if (item == "moments") vcfg.moments = false;
          else if (item == "marginals") vcfg.marginals = false;
          else if (item == "density") vcfg.density = false;
          else if (item == "blocks") vcfg.blocks = false;
          else throw riesz::ArgumentError("unknown check '" + item + "' in --skip");
        }
      }
      const json doc = riesz::report::run_verify(vcfg);
      Output out(verify_out);
      out.stream() << doc.dump(2) << '\n';
      return doc["pass"].get<bool>() ? 0 : kExitFail;
    }

    if (*infer) {
      riesz::MaskedTable table;
      if (infer_csv == "-") {
        table = riesz::read_masked_csv(std::cin);
      } else {
        std::ifstream in(infer_csv);
        if (!in) throw riesz::ParseError("cannot open " + infer_csv);
        table = riesz::read_masked_csv(in);
      }
      auto decision = riesz::detect_monotone(table);
      if (!decision.monotone && infer_reorder) {
        if (auto re = riesz::reorder_for_monotonicity(table)) {
          std::cerr << "permutation:";
          for (std::size_t k = 0; k < re->permutation.size(); ++k) {
            std::cerr << (k ? "," : " ") << re->permutation[k] + 1;
          }
          std::cerr << '\n';
          table = std::move(re->table);
          decision = riesz::detect_monotone(table);
        }
      }
      if (!decision.monotone) {
        throw riesz::PatternError(decision.witness_row,
                                  "table is not monotone (row " + std::to_string(decision.witness_row) +
                                      ", column " + std::to_string(decision.witness_column) + ")" +
                                      (infer_reorder ? " under any column order" : "; try --reorder"));
      }
      if (infer_warn) {
        for (std::size_t c : riesz::centering_warnings(table)) {
          std::cerr << "warning: column " << c << " mean is more than 3 standard errors from zero\n";
        }
      }
      if (!infer_gram.empty()) {
        std::ofstream g(infer_gram);
        if (!g) throw riesz::ArgumentError("cannot write " + infer_gram);
        riesz::write_matrix(g, riesz::gram_zero_imputed(table));
      }
      Output out(infer_out);
      out.stream() << json{{"counts", decision.counts}}.dump() << '\n';
      return 0;
    }

    if (*gindikin) {
      if (!gindikin_s.empty()) {
        const riesz::PowerExponent s(riesz::io::parse_real_list(gindikin_s));
        const auto xi = riesz::in_gindikin_xi(s);
        if (xi.member) {
          std::cout << "member (u = ";
          for (std::size_t k = 0; k < xi.witness.size(); ++k) {
            std::cout << (k ? "," : "") << riesz::format_double(xi.witness[k]);
          }
          std::cout << "); " << riesz::to_string(riesz::is_absolutely_continuous(s)
                                                      ? riesz::Regularity::absolutely_continuous
                                                      : riesz::Regularity::singular)
                    << '\n';
        } else {
          std::cout << "not a member (fails at k=" << xi.failing_index << ")\n";
        }
      }
      if (gindikin_p) {
        if (gindikin_r < 1) throw riesz::ArgumentError("--p needs --r >= 1");
        std::cout << (riesz::in_gindikin_lambda(*gindikin_p, gindikin_r, include_zero) ? "in Lambda" : "not in Lambda")
                  << '\n';
      }
      if (gindikin_s.empty() && !gindikin_p) throw riesz::ArgumentError("give --s or --p/--r");
      return 0;
    }
  } catch (const riesz::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
