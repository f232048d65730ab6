#include <gtest/gtest.h>

#include <sstream>

#include "riesz/io.hpp"
#include "riesz/report.hpp"

using namespace riesz;
using riesz::io::json;

TEST(MatrixText, ParseAndWrite) {
  const auto x = parse_matrix("2\n2 1\n1 3\n");
  EXPECT_EQ(x, SymMatrix::from_rows({{2, 1}, {1, 3}}));
  std::ostringstream out;
  write_matrix(out, x);
  EXPECT_EQ(out.str(), "2\n2 1\n1 3\n");
  EXPECT_EQ(parse_matrix(out.str()), x);

  std::istringstream many("1\n4\n2\n1 0\n0 1\n");
  const auto v = read_matrices(many);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0], SymMatrix::diagonal({4}));
  EXPECT_EQ(v[1], SymMatrix::identity(2));
}

TEST(MatrixText, Errors) {
  EXPECT_THROW(parse_matrix("2\n1 2\n3 4\n"), ParseError);
  EXPECT_THROW(parse_matrix("2\n1 0\n0\n"), ParseError);
  EXPECT_THROW(parse_matrix("0\n"), ParseError);
  EXPECT_THROW(parse_matrix(""), ParseError);
  EXPECT_THROW(parse_matrix("x"), ParseError);
}

TEST(SymMatrix, FromDenseToleratesRoundoff) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.5 + 1e-12, 0.5, 1;
  const auto x = SymMatrix::from_dense(m);
  EXPECT_EQ(x(0, 1), x(1, 0));
  m(0, 1) = 0.6;
  EXPECT_THROW(SymMatrix::from_dense(m), ArgumentError);
  EXPECT_THROW(SymMatrix(0), ArgumentError);
}

TEST(SymMatrix, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Lists, Parse) {
  EXPECT_EQ(io::parse_int_list("2,3,5"), (std::vector<int>{2, 3, 5}));
  EXPECT_EQ(io::parse_real_list("1,1.5,-0.25"), (std::vector<double>{1, 1.5, -0.25}));
  EXPECT_THROW(io::parse_int_list("2,,3"), ParseError);
  EXPECT_THROW(io::parse_int_list("2.5"), ParseError);
  EXPECT_THROW(io::parse_real_list(""), ParseError);
}

TEST(Json, Pattern) {
  const auto p = io::pattern_from_json(json::parse(R"({"counts":[2,2,5]})"));
  EXPECT_EQ(p.counts(), (std::vector<int>{2, 2, 5}));
  EXPECT_EQ(io::pattern_to_json(p).dump(), R"({"counts":[2,2,5]})");
  EXPECT_THROW(io::pattern_from_json(json::parse(R"({"counts":[3,2]})")), PatternError);
  EXPECT_THROW(io::pattern_from_json(json::parse(R"({"c":[3]})")), ParseError);
  EXPECT_THROW(io::pattern_from_json(json::parse(R"({"counts":[1.5]})")), ParseError);
}

TEST(Json, Params) {
  const auto a = io::params_from_json(json::parse(R"({"r":2,"s":[1,1.5],"sigma":"identity"})"));
  EXPECT_EQ(a.sigma(), SymMatrix::identity(2));
  const auto b = io::params_from_json(json::parse(R"({"r":2,"s":[1,1.5],"sigma":[[2,0.5],[0.5,1]]})"));
  EXPECT_EQ(b.sigma(), SymMatrix::from_rows({{2, 0.5}, {0.5, 1}}));
  const auto round = io::params_from_json(io::params_to_json(b));
  EXPECT_EQ(round.s(), b.s());
  EXPECT_EQ(round.sigma(), b.sigma());

  EXPECT_THROW(io::params_from_json(json::parse(R"({"r":2,"s":[1]})")), ParseError);
  EXPECT_THROW(io::params_from_json(json::parse(R"({"r":2,"s":[1,1],"convention":"rate"})")), ParseError);
  EXPECT_THROW(io::params_from_json(json::parse(R"({"r":2,"s":[0.25,0.25]})")), InvalidShapeError);
  EXPECT_THROW(io::params_from_json(json::parse(R"({"r":1,"s":[1],"sigma":[[-1]]})")), InvalidScaleError);
}

TEST(BatchCsv, RoundTrip) {
  const auto pattern = compute_boundaries({2, 3});
  const auto batch = sample_riesz_identity(pattern, 25, 4, 1);
  std::ostringstream out;
  io::write_batch_csv(out, batch);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("sample,i,j,value\n0,0,0,", 0), 0u);
  std::istringstream in(text);
  const auto back = io::read_batch_csv(in, 2);
  ASSERT_EQ(back.size(), 25u);
  for (std::size_t k = 0; k < 25; ++k) EXPECT_EQ(back[k], batch.matrices[k]);

  const auto side = io::batch_sidecar(pattern, 4, 25);
  EXPECT_EQ(side["format_version"], 1);
  EXPECT_EQ(side["seed"], 4);
  EXPECT_EQ(side["count"], 25);
  EXPECT_EQ(side["pattern"]["counts"], json::array({2, 3}));

  std::istringstream bad("nope\n");
  EXPECT_THROW(io::read_batch_csv(bad, 2), ParseError);
  std::istringstream out_of_range("sample,i,j,value\n0,2,0,1\n");
  EXPECT_THROW(io::read_batch_csv(out_of_range, 2), ParseError);
}

TEST(Report, DeterministicAndWorkerIndependent) {
  report::VerifyConfig cfg;
  cfg.counts = {2, 3};
  cfg.count = 2000;
  cfg.seed = 5;
  cfg.deterministic = true;
  cfg.workers = 1;
  const auto a = report::run_verify(cfg).dump();
  cfg.workers = 3;
  const auto b = report::run_verify(cfg).dump();
  EXPECT_EQ(a, b);
  const auto doc = json::parse(a);
  EXPECT_FALSE(doc.contains("timestamp"));
  EXPECT_TRUE(doc["metadata"].contains("note"));
  for (const auto& c : doc["checks"]) {
    EXPECT_TRUE(c.contains("name"));
    EXPECT_TRUE(c.contains("pass"));
  }
  cfg.deterministic = false;
  EXPECT_TRUE(report::run_verify(cfg).contains("timestamp"));
}

TEST(Report, SkipsUnsupportedChecks) {
  report::VerifyConfig cfg;
  cfg.counts = {1, 2, 3};
  cfg.count = 500;
  cfg.deterministic = true;
  const auto doc = report::run_verify(cfg);
  bool saw_density = false, saw_ks = false;
  for (const auto& c : doc["checks"]) {
    if (c["name"] == "density_normalization") {
      saw_density = true;
      EXPECT_TRUE(c.value("skipped", false));
    }
    if (c["name"] == "marginal_ks") {
      saw_ks = true;
      EXPECT_TRUE(c.value("skipped", false));
    }
  }
  EXPECT_TRUE(saw_density);
  EXPECT_TRUE(saw_ks);
}
