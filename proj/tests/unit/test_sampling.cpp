#include <doctest.h>

#include <cmath>
#include <vector>

#include "extree/closed_form.hpp"
#include "extree/error.hpp"
#include "extree/estimators.hpp"
#include "extree/sampling.hpp"
#include "support.hpp"

using namespace extree;
using testing::tree_of;

namespace {

std::vector<double> column(const Eigen::MatrixXd& x, Eigen::Index c) {
  return {x.col(c).data(), x.col(c).data() + x.rows()};
}

double frechet_cdf(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

}  // namespace

TEST_CASE("edge extremal functions have unit mean and positive draws") {
  const std::vector<EdgeDistribution> edges{
      EdgeDistribution::husler_reiss(0.5), EdgeDistribution::husler_reiss(2.0),
      EdgeDistribution::logistic(0.3), EdgeDistribution::logistic(0.5),
      EdgeDistribution::dirichlet(1.0, 1.0), EdgeDistribution::dirichlet(2.0, 7.0)};
  std::uint64_t stream = 0;
  for (const auto& e : edges) {
    for (auto o : {Orientation::Forward, Orientation::Backward}) {
      RandomStream rng(123, stream++);
      std::vector<double> w(200000);
      for (double& x : w) {
        x = sample_edge_w(e, o, rng);
        REQUIRE(x > 0.0);
      }
      const auto m = testing::mean_se(w);
      CAPTURE(e.family());
      CHECK(std::abs(m.mean - 1.0) < 3.5 * m.se);
    }
  }
}

TEST_CASE("Husler-Reiss log W is normal with mean -gamma/2 and variance gamma") {
  RandomStream rng(1);
  std::vector<double> l(200000);
  for (double& x : l) x = sample_edge_log_w(EdgeDistribution::husler_reiss(1.0), Orientation::Forward, rng);
  const auto m = testing::mean_se(l);
  const auto v = testing::variance_se(l);
  CHECK(std::abs(m.mean + 0.5) < 3 * m.se);
  CHECK(std::abs(v.mean - 1.0) < 3 * v.se);
}

TEST_CASE("log W variance matches the edge variogram in both orientations") {
  const std::vector<EdgeDistribution> edges{EdgeDistribution::logistic(0.4),
                                            EdgeDistribution::dirichlet(1.5, 6.0)};
  for (const auto& e : edges) {
    for (auto o : {Orientation::Forward, Orientation::Backward}) {
      RandomStream rng(77);
      std::vector<double> l(200000);
      for (double& x : l) x = sample_edge_log_w(e, o, rng);
      const auto v = testing::variance_se(l);
      CHECK(std::abs(v.mean - edge_variogram(e, o)) < 3.5 * v.se);
    }
  }
}

TEST_CASE("extremal function vector") {
  const LabeledTree chain = tree_of(3, {{0, 1}, {1, 2}});
  const ExtremalTreeModel model(chain, std::vector<EdgeDistribution>{EdgeDistribution::logistic(0.4),
                                                                      EdgeDistribution::dirichlet(2, 3)});
  RandomStream rng(3);
  for (NodeId m = 0; m < 3; ++m) {
    for (int i = 0; i < 1000; ++i) {
      const auto w = sample_w_vector(model, m, rng);
      REQUIRE(w.size() == 3);
      CHECK(w[m] == 1.0);
      for (double x : w) CHECK(x >= 0.0);
    }
  }
  const ExtremalFunctionSampler sampler(model);
  std::vector<double> log_w(3);
  std::vector<double> edge_log_w(2);
  for (int i = 0; i < 1000; ++i) {
    sampler.sample_log(0, rng, log_w, edge_log_w);
    CHECK(log_w[0] == 0.0);
    CHECK(log_w[1] == edge_log_w[0]);
    CHECK(log_w[2] == edge_log_w[0] + edge_log_w[1]);
  }
}

TEST_CASE("rooted Pareto vector") {
  RandomStream rng(4);
  const ExtremalTreeModel model =
      ExtremalTreeModel::all_husler_reiss(tree_of(4, {{0, 1}, {1, 2}, {1, 3}}), 0.8);
  const Eigen::MatrixXd y = sample_y_rooted(model, 2, 100000, rng);
  CHECK(y.col(2).minCoeff() >= 1.0);
  const auto col = column(y, 2);
  CHECK(testing::ks_statistic(col, [](double x) { return x < 1.0 ? 0.0 : 1.0 - 1.0 / x; }) <
        testing::ks_critical_1pct(col.size()));
  for (double t : {1.0, 2.0, 4.0}) {
    double above_t = 0.0;
    double above_2t = 0.0;
    for (double v : col) {
      above_t += v > t;
      above_2t += v > 2 * t;
    }
    const double ratio = above_2t / above_t;
    const double se = std::sqrt(0.25 / above_t);
    CHECK(std::abs(ratio - 0.5) < 3 * se);
  }
}

TEST_CASE("max-stable margins are standard Frechet") {
  RandomStream rng(5);
  const ExtremalTreeModel model(tree_of(3, {{0, 1}, {0, 2}}),
                                std::vector<EdgeDistribution>{EdgeDistribution::logistic(0.6),
                                                              EdgeDistribution::dirichlet(2, 4)});
  const Eigen::MatrixXd z = sample_max_stable(model, 30000, rng);
  for (Eigen::Index c = 0; c < 3; ++c) {
    CHECK(testing::ks_statistic(column(z, c), frechet_cdf) < testing::ks_critical_1pct(30000));
  }
}

TEST_CASE("max-stable pairwise extremal correlation matches the closed form") {
  RandomStream rng(6);
  const ExtremalTreeModel model = ExtremalTreeModel::all_husler_reiss(tree_of(3, {{0, 1}, {1, 2}}), 0.5);
  const Eigen::MatrixXd z = sample_max_stable(model, 200000, rng);
  const RankMatrix ranks = rank_transform(z);
  const std::size_t k = 4000;
  CHECK(std::abs(chi_hat(ranks, 0, 1, k) - hr_chi_from_gamma(0.5)) < 0.03);
  CHECK(std::abs(chi_hat(ranks, 0, 2, k) - hr_chi_from_gamma(1.0)) < 0.03);
}

TEST_CASE("one-dimensional max-stable sampling reduces to Frechet draws") {
  RandomStream rng(7);
  const ExtremalFunctionSource constant = [](NodeId, RandomStream&, std::span<double> w) { w[0] = 1.0; };
  const Eigen::MatrixXd z = sample_max_stable(1, constant, 20000, rng);
  CHECK(z.cols() == 1);
  CHECK(testing::ks_statistic(column(z, 0), frechet_cdf) < testing::ks_critical_1pct(20000));
}

TEST_CASE("proposal cap raises a diagnostic") {
  RandomStream rng(8);
  const ExtremalTreeModel model = ExtremalTreeModel::all_husler_reiss(tree_of(3, {{0, 1}, {1, 2}}), 50.0);
  SamplingOptions opts;
  opts.proposal_cap_per_dim = 0;
  try {
    sample_max_stable(model, 10, rng, opts);
    FAIL("expected SamplerCapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SamplerCapExceeded);
  }
}

TEST_CASE("noise margins and dependence") {
  RandomStream rng(9);
  const auto noise_cdf = [](double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / (x * x)); };
  const Eigen::MatrixXd n1 = sample_noise(IndependentNoise{}, 50000, 3, rng);
  CHECK(n1.minCoeff() > 0.0);
  for (Eigen::Index c = 0; c < 3; ++c) {
    CHECK(testing::ks_statistic(column(n1, c), noise_cdf) < testing::ks_critical_1pct(50000));
  }
  const RankMatrix r1 = rank_transform(n1);
  CHECK(chi_hat(r1, 0, 1, 1000) < 0.05);

  const NoiseSpec n2{TreeNoise{ExtremalTreeModel::all_husler_reiss(tree_of(3, {{0, 2}, {1, 2}}), 0.5)}};
  const Eigen::MatrixXd e2 = sample_noise(n2, 50000, 3, rng);
  for (Eigen::Index c = 0; c < 3; ++c) {
    CHECK(testing::ks_statistic(column(e2, c), noise_cdf) < testing::ks_critical_1pct(50000));
  }
  CHECK(chi_hat(rank_transform(e2), 0, 2, 1000) > 0.5);
  try {
    sample_noise(n2, 10, 4, rng);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
}

TEST_CASE("domain-of-attraction data add positive noise to Z") {
  const ExtremalTreeModel model = ExtremalTreeModel::all_husler_reiss(tree_of(2, {{0, 1}}), 1.0);
  RandomStream rng(10);
  const DataMatrix x = sample_domain_of_attraction(model, IndependentNoise{}, 20000, rng);
  RandomStream z_rng = RandomStream(10).substream(0);
  const Eigen::MatrixXd z = sample_max_stable(model, 20000, z_rng);
  CHECK((x.values().array() >= z.array()).all());
  CHECK((x.values() - z).minCoeff() > 0.0);
}

TEST_CASE("domain-of-attraction chi approaches the model value") {
  const ExtremalTreeModel model = ExtremalTreeModel::all_husler_reiss(tree_of(2, {{0, 1}}), 1.0);
  RandomStream rng(11);
  const DataMatrix x = sample_domain_of_attraction(model, IndependentNoise{}, 200000, rng);
  const RankMatrix ranks = rank_transform(x);
  CHECK(std::abs(chi_hat(ranks, 0, 1, k_from_fraction(0.02, 200000).k) - 0.617075) < 0.03);
}

TEST_CASE("sampling is reproducible and independent of the thread count") {
  const ExtremalTreeModel model(tree_of(4, {{0, 1}, {1, 2}, {1, 3}}),
                                std::vector<EdgeDistribution>{EdgeDistribution::husler_reiss(0.4),
                                                              EdgeDistribution::logistic(0.5),
                                                              EdgeDistribution::dirichlet(3, 2)});
  SamplingOptions one;
  SamplingOptions four;
  four.threads = 4;
  RandomStream a(42);
  RandomStream b(42);
  CHECK(sample_max_stable(model, 2000, a, one) == sample_max_stable(model, 2000, b, four));
  RandomStream c(42);
  RandomStream d(42);
  const NoiseSpec n2{TreeNoise{ExtremalTreeModel::all_husler_reiss(tree_of(4, {{0, 1}, {0, 2}, {0, 3}}), 0.5)}};
  CHECK(sample_domain_of_attraction(model, n2, 2000, c, one).values() ==
        sample_domain_of_attraction(model, n2, 2000, d, four).values());
}
