#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "extree/error.hpp"
#include "extree/estimators.hpp"
#include "extree/sampling.hpp"
#include "extree/serialization.hpp"
#include "extree/version.hpp"
#include "support.hpp"

using namespace extree;
using testing::tree_of;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidParameter;
}

Eigen::MatrixXd awkward_matrix(RandomStream& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = std::exp(rng.normal() * 20.0) * (rng.uniform() - 0.3);
  }
  return m;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  RandomStream rng(1);
  for (int i = 0; i < 20000; ++i) {
    const double x = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.uniform_index(200)) - 100);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
        std::numeric_limits<double>::denorm_min());
  CHECK(std::stod(format_double(std::numeric_limits<double>::max())) == std::numeric_limits<double>::max());
}

TEST_CASE("tree json") {
  const LabeledTree t = tree_of(4, {{2, 3}, {0, 2}, {1, 2}});
  const Json j = tree_to_json(t, {"a", "b", "c", "d"});
  CHECK(j.dump() == R"({"d":4,"edges":[[0,2],[1,2],[2,3]],"names":["a","b","c","d"]})");
  const NamedTree back = tree_from_json(j);
  CHECK(tree_equal(back.tree, t));
  CHECK(back.names == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(tree_to_json(back.tree, back.names).dump() == j.dump());
  CHECK_FALSE(tree_to_json(t).contains("names"));

  CHECK(code_of([] { tree_from_json(parse_json(R"({"d":3,"edges":[[0,1],[0,1]]})")); }) == Errc::DuplicateEdge);
  CHECK(code_of([] { tree_from_json(parse_json(R"({"d":3,"edges":[[0,1]]})")); }) == Errc::WrongEdgeCount);
  CHECK(code_of([] { tree_from_json(parse_json(R"({"d":3})")); }) == Errc::ParseError);
  CHECK(code_of([] { tree_from_json(parse_json(R"({"d":"3","edges":[]})")); }) == Errc::ParseError);
  CHECK(code_of([] { tree_from_json(parse_json(R"({"d":2,"edges":[[0,1,2]]})")); }) == Errc::ParseError);
  CHECK(code_of([] { parse_json("{\"d\": "); }) == Errc::ParseError);
}

TEST_CASE("model json round trip is byte identical") {
  RandomStream rng(2);
  const LabeledTree t = tree_of(4, {{0, 1}, {1, 2}, {1, 3}});
  const ExtremalTreeModel model(
      t, std::vector<EdgeDistribution>{EdgeDistribution::husler_reiss(rng.uniform(0.1, 3.0)),
                                       EdgeDistribution::logistic(rng.uniform(0.05, 0.95)),
                                       EdgeDistribution::dirichlet(rng.uniform(0.5, 9), rng.uniform(0.5, 9))});
  const std::string text = model_to_json(model, {"w", "x", "y", "z"}).dump(2);
  std::vector<std::string> names;
  const ExtremalTreeModel back = model_from_json(parse_json(text), &names);
  CHECK(names == std::vector<std::string>{"w", "x", "y", "z"});
  CHECK(model_to_json(back, names).dump(2) == text);
  for (std::size_t e = 0; e < 3; ++e) CHECK(edge_model_to_json(back.edge_model(e)) == edge_model_to_json(model.edge_model(e)));

  CHECK(code_of([] {
          model_from_json(parse_json(
              R"({"d":2,"edges":[[0,1]],"edge_models":{"0-1":{"family":"gumbel","theta":0.5}}})"));
        }) == Errc::InvalidParameter);
  CHECK(code_of([] {
          model_from_json(parse_json(
              R"({"d":2,"edges":[[0,1]],"edge_models":{"0-1":{"family":"logistic","theta":1.5}}})"));
        }) == Errc::InvalidParameter);
  CHECK(code_of([] {
          model_from_json(parse_json(
              R"({"d":2,"edges":[[0,1]],"edge_models":{"0+1":{"family":"husler_reiss","gamma":1}}})"));
        }) == Errc::ParseError);
}

TEST_CASE("variogram and estimate json round trips") {
  RandomStream rng(3);
  const ExtremalTreeModel model = ExtremalTreeModel::all_husler_reiss(tree_of(3, {{0, 1}, {1, 2}}), 0.7);
  const VariogramMatrix g = model_variogram(model, 2);
  const Json gj = variogram_to_json(g);
  CHECK(gj["root"] == 2);
  const VariogramMatrix gb = variogram_from_json(parse_json(gj.dump()));
  CHECK(gb.matrix() == g.matrix());
  CHECK(gb.root() == g.root());
  CHECK(variogram_to_json(gb).dump() == gj.dump());

  Eigen::MatrixXd sym = awkward_matrix(rng, 3, 3).cwiseAbs();
  sym = (sym + sym.transpose()).eval();
  sym.diagonal().setZero();
  const VariogramMatrix free_root(sym, std::nullopt);
  CHECK(variogram_to_json(free_root)["root"].is_null());
  CHECK(variogram_from_json(variogram_to_json(free_root)).matrix() == free_root.matrix());

  const DataMatrix data = sample_domain_of_attraction(model, IndependentNoise{}, 500, rng);
  const RankMatrix r = rank_transform(data);
  const std::vector<double> w{0.5, 0.25, 0.25};
  for (const VariogramEstimate& e : {gamma_hat_rooted(r, 1, 60), gamma_hat_combined(r, 60, w)}) {
    const std::string text = estimate_to_json(e).dump();
    const VariogramEstimate back = estimate_from_json(parse_json(text));
    CHECK(back.g == e.g);
    CHECK(back.root == e.root);
    CHECK(back.weights == e.weights);
    CHECK(back.k == 60);
    CHECK(back.n == 500);
    CHECK(estimate_to_json(back).dump() == text);
  }
  CHECK(code_of([] { matrix_from_json(parse_json("[[1,2],[3]]")); }) == Errc::ParseError);
}

TEST_CASE("fitted model and bootstrap json round trips") {
  RandomStream rng(4);
  const ExtremalTreeModel model = ExtremalTreeModel::all_husler_reiss(tree_of(4, {{0, 1}, {1, 2}, {2, 3}}), 0.5);
  const DataMatrix data = sample_domain_of_attraction(model, IndependentNoise{}, 2000, rng);
  const RankMatrix r = rank_transform(data);
  const FittedHrTree fit = fit_hr_tree(r, default_k(2000));
  const std::string text = fitted_to_json(fit).dump(2);
  const FittedHrTree back = fitted_from_json(parse_json(text));
  CHECK(tree_equal(back.tree, fit.tree));
  CHECK(back.edge_gamma == fit.edge_gamma);
  CHECK(back.full_gamma == fit.full_gamma);
  CHECK(back.implied_chi == fit.implied_chi);
  CHECK(fitted_to_json(back).dump(2) == text);

  RandomStream b(5);
  const BootstrapResult boot = bootstrap_stability(data, 300, 7, Learner{}, b);
  const std::string btext = bootstrap_to_json(boot).dump();
  const BootstrapResult bb = bootstrap_from_json(parse_json(btext));
  CHECK(bb.counts == boot.counts);
  CHECK(bb.frequency == boot.frequency);
  CHECK(bb.resamples == 7);
  CHECK(bootstrap_to_json(bb).dump() == btext);
}

TEST_CASE("experiment config json") {
  ExperimentConfig c;
  c.d = 6;
  c.n_list = {100, 2500};
  c.k_rule = FractionGrid{{0.01, 0.05, 0.3}};
  c.family = ModelM1Fixed{0.35};
  c.noise = NoiseKind::N2;
  c.methods = {LearnMethod::Chi, LearnMethod::GammaWeighted};
  c.weights = {1, 2, 3, 0, 0, 1};
  c.repetitions = 17;
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  c.gamma_root = 3;
  c.tree_mode = RandomTreeMode::UniformSpanning;
  const std::string text = config_to_json(c).dump(2);
  const ExperimentConfig back = config_from_json(parse_json(text));
  CHECK(config_to_json(back).dump(2) == text);
  CHECK(back.seed == c.seed);
  CHECK(std::get<ModelM1Fixed>(back.family).lambda == 0.35);
  CHECK(std::get<FractionGrid>(back.k_rule).q == std::vector<double>{0.01, 0.05, 0.3});

  for (const ExperimentConfig& other : {ExperimentConfig{}, [] {
         ExperimentConfig m2;
         m2.family = ModelM2{};
         m2.k_rule = FixedK{40};
         return m2;
       }()}) {
    const std::string t = config_to_json(other).dump();
    CHECK(config_to_json(config_from_json(parse_json(t))).dump() == t);
  }

  const ExperimentConfig minimal = config_from_json(parse_json(R"({"d":5,"n_list":[300]})"));
  CHECK(minimal.d == 5);
  CHECK(minimal.repetitions == ExperimentConfig{}.repetitions);
  CHECK(code_of([] { config_from_json(parse_json(R"({"d":5,"n_list":[300],"repetitions":0})")); }) == Errc::InvalidParameter);
  CHECK(code_of([] { config_from_json(parse_json(R"({"d":5,"n_list":[300],"model":{"family":"M9"}})")); }) == Errc::ParseError);
  CHECK(code_of([] { config_from_json(parse_json(R"({"d":5,"n_list":[300],"methods":["kruskal"]})")); }) == Errc::InvalidParameter);
}

TEST_CASE("version and csv writers") {
  Json j = with_version(Json::object());
  CHECK(j["version"] == version_string());
  CHECK(version_string().rfind("extree ", 0) == 0);

  RandomStream rng(6);
  const Eigen::MatrixXd m = awkward_matrix(rng, 50, 3);
  std::ostringstream out;
  write_matrix_csv(out, m, {"a", "b", "c"});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "a,b,c");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    REQUIRE(std::getline(in, line));
    std::istringstream row(line);
    std::string cell;
    for (Eigen::Index c = 0; c < 3; ++c) {
      std::getline(row, cell, ',');
      CHECK(std::stod(cell) == m(i, c));
    }
  }
  std::ostringstream plain;
  write_matrix_csv(plain, Eigen::MatrixXd::Zero(1, 2));
  CHECK(plain.str() == "V0,V1\n0,0\n");

  ExperimentResult r;
  r.cells.push_back(ExperimentCell{LearnMethod::Chi, 1000, 251, 0.251, 0.1, 0.01, 0.3, 0.04, 10, 0});
  std::ostringstream csv;
  write_experiment_csv(csv, r);
  CHECK(csv.str() == "method,n,k,q,err_mean,err_se,srr_mean,srr_se,reps\nchi,1000,251,0.251,0.1,0.01,0.3,0.04,10\n");
}
