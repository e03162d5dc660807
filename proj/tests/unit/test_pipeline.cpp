#include <doctest.h>

#include <cmath>
#include <sstream>

#include "extree/error.hpp"
#include "extree/pipeline.hpp"
#include "extree/sampling.hpp"
#include "support.hpp"

using namespace extree;
using testing::tree_of;

namespace {

NamedData simulated(const LabeledTree& t, double gamma, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  const ExtremalTreeModel model = ExtremalTreeModel::all_husler_reiss(t, gamma);
  DataMatrix data = sample_domain_of_attraction(model, IndependentNoise{}, n, rng);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < t.d(); ++c) names.push_back("s" + std::to_string(c));
  return {std::move(data), std::move(names)};
}

}  // namespace

TEST_CASE("csv parsing") {
  const NamedData a = parse_csv("a,b\n1,2\n3,4\n5,6\n");
  CHECK(a.names == std::vector<std::string>{"a", "b"});
  CHECK(a.data.n() == 3);
  CHECK(a.data.d() == 2);
  CHECK(a.data.values()(2, 1) == 6.0);

  const NamedData quoted = parse_csv("\"x\";\"y z\"\r\n-1.5;2e3\r\n0;-4\r\n\r\n", {.delimiter = ';'});
  CHECK(quoted.names == std::vector<std::string>{"x", "y z"});
  CHECK(quoted.data.values()(0, 1) == 2000.0);

  const NamedData abs = parse_csv("1,-2\n-3,4\n", {.header = false, .absolute = true});
  CHECK(abs.names == std::vector<std::string>{"V0", "V1"});
  CHECK(abs.data.values()(0, 1) == 2.0);
  CHECK(abs.data.values()(1, 0) == 3.0);

  try {
    parse_csv("a,b\n1,2\n3\n5,6\n");
    FAIL("expected a parse failure");
  } catch (const ParseFailure& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(e.row() == 3);
  }
  try {
    parse_csv("a,b\n1,2\n3,x\n");
    FAIL("expected a parse failure");
  } catch (const ParseFailure& e) {
    CHECK(e.code() == Errc::NonNumericCell);
    CHECK(e.row() == 3);
    CHECK(e.col() == 2);
  }
  for (const char* bad : {"a,b\n1,nan\n2,3\n", "a,b\n1,inf\n2,3\n", "a,b\n1,\n2,3\n"}) {
    CHECK_THROWS_AS(parse_csv(bad), ParseFailure);
  }
  try {
    parse_csv("a,b\n1,2\n");
    FAIL("expected TooFewRows");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewRows);
  }
  try {
    ingest_csv("/nonexistent/file.csv");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IoError);
    CHECK_FALSE(is_numerical(e.code()));
  }
}

TEST_CASE("pipeline report contents") {
  const LabeledTree t = tree_of(4, {{0, 1}, {1, 2}, {1, 3}});
  const NamedData input = simulated(t, 0.5, 3790, 1);
  PipelineOptions opts;
  const PipelineReport report = run_pipeline(input, opts);
  CHECK(report.k == 190);
  CHECK_FALSE(report.k_clamped);
  CHECK(report.n == 3790);
  CHECK(report.d == 4);
  CHECK_FALSE(report.bootstrap.has_value());
  REQUIRE(report.fit.has_value());
  CHECK(report.chi_table.size() == 6);
  for (const auto& row : report.chi_table) {
    CHECK(row.i < row.j);
    for (double v : {row.empirical, row.implied}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  REQUIRE(report.chi_curves.size() == 6);
  const auto& curve = report.chi_curves[0].points;
  REQUIRE(curve.size() == default_chi_levels().size());
  for (const auto& p : curve) {
    CHECK(p.tail_fraction == doctest::Approx(1.0 - p.quantile_level));
    CHECK(p.chi >= 0.0);
    CHECK(p.chi <= 1.0);
  }
  CHECK(tree_equal(report.tree, t));

  const Json j = report_to_json(report);
  CHECK(j["version"] == report.version);
  CHECK_FALSE(j.contains("bootstrap"));
  CHECK(j["input"]["names"] == input.names);
  const std::string text = dump_json(j);
  CHECK(text.back() == '\n');
  CHECK(dump_json(report_to_json(report_from_json(parse_json(text)))) == text);

  opts.fit_hr = false;
  opts.bootstrap = 5;
  opts.seed = 11;
  opts.chi_pairs = {{0, 3}};
  opts.chi_levels = {0.9, 0.99};
  const PipelineReport boot = run_pipeline(input, opts);
  CHECK_FALSE(boot.fit.has_value());
  CHECK(boot.chi_table.empty());
  REQUIRE(boot.bootstrap.has_value());
  CHECK(boot.bootstrap->resamples == 5);
  CHECK(boot.chi_curves.size() == 1);
  CHECK(boot.chi_curves[0].points[1].k == 38);
  const std::string btext = dump_json(report_to_json(boot));
  CHECK(dump_json(report_to_json(report_from_json(parse_json(btext)))) == btext);
  opts.threads = 3;
  CHECK(dump_json(report_to_json(run_pipeline(input, opts))) == btext);

  opts.q = 1.5;
  CHECK_THROWS_AS(run_pipeline(input, opts), Error);
}

TEST_CASE("pipeline recovers a simulated tree") {
  const LabeledTree t = tree_of(5, {{0, 1}, {0, 2}, {2, 3}, {2, 4}});
  const PipelineReport report = run_pipeline(simulated(t, 0.3, 20000, 2), PipelineOptions{});
  CHECK(tree_equal(report.tree, t));
  for (const auto& row : report.chi_table) CHECK(std::abs(row.empirical - row.implied) < 0.1);
}

TEST_CASE("clamped k is reported") {
  const NamedData input = parse_csv("a,b\n1,2\n2,1\n3,5\n4,4\n");
  PipelineOptions opts;
  opts.q = 0.01;
  opts.fit_hr = false;
  const PipelineReport report = run_pipeline(input, opts);
  CHECK(report.k == 2);
  CHECK(report.k_clamped);
}
