#include <doctest.h>

#include <cmath>
#include <vector>

#include "extree/random.hpp"
#include "support.hpp"

using extree::RandomStream;

TEST_CASE("identical seed and stream reproduce the sequence") {
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams and substreams differ") {
  RandomStream a(42, 0);
  RandomStream b(42, 1);
  RandomStream c = a.substream(0);
  RandomStream d = a.substream(1);
  int same_ab = 0;
  int same_cd = 0;
  for (int i = 0; i < 100; ++i) {
    same_ab += a.next_u64() == b.next_u64();
    same_cd += c.next_u64() == d.next_u64();
  }
  CHECK(same_ab == 0);
  CHECK(same_cd == 0);
}

TEST_CASE("substream does not advance the parent") {
  RandomStream a(3);
  RandomStream b(3);
  (void)a.substream(5);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(RandomStream(3).substream(9).next_u64() == RandomStream(3).substream(9).next_u64());
}

TEST_CASE("uniform stays strictly inside (0, 1)") {
  RandomStream rng(1);
  std::vector<double> u(100000);
  for (double& x : u) {
    x = rng.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
  }
  CHECK(testing::ks_statistic(u, [](double x) { return x; }) < testing::ks_critical_1pct(u.size()));
}

TEST_CASE("uniform_index covers the range evenly") {
  RandomStream rng(2);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.uniform_index(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("exponential and normal moments") {
  RandomStream rng(3);
  std::vector<double> e(200000);
  std::vector<double> z(200000);
  for (auto& x : e) x = rng.exponential();
  for (auto& x : z) x = rng.normal();
  const auto me = testing::mean_se(e);
  const auto mz = testing::mean_se(z);
  CHECK(std::abs(me.mean - 1.0) < 4 * me.se);
  CHECK(std::abs(mz.mean) < 4 * mz.se);
  const auto vz = testing::variance_se(z);
  CHECK(std::abs(vz.mean - 1.0) < 4 * vz.se);
}

TEST_CASE("gamma variates have mean shape*scale and variance shape*scale^2") {
  for (double shape : {0.2, 0.5, 1.0, 2.5, 10.0}) {
    CAPTURE(shape);
    RandomStream rng(11, static_cast<std::uint64_t>(shape * 10));
    std::vector<double> g(200000);
    for (auto& x : g) {
      x = rng.gamma(shape, 2.0);
      REQUIRE(x > 0.0);
    }
    const auto m = testing::mean_se(g);
    CHECK(std::abs(m.mean - 2.0 * shape) < 4 * m.se);
    const auto v = testing::variance_se(g);
    CHECK(std::abs(v.mean - 4.0 * shape) < 4 * v.se);
  }
}

TEST_CASE("log_gamma_variate agrees in law with log(gamma)") {
  // E[log G] = digamma(shape): digamma(0.5) = -gamma_E - 2 log 2, digamma(3) = 1.5 - gamma_E.
  const double euler = 0.57721566490153286;
  const std::vector<std::pair<double, double>> cases{{0.5, -euler - 2.0 * std::log(2.0)}, {3.0, 1.5 - euler}};
  for (const auto& [shape, digamma] : cases) {
    RandomStream rng(5);
    std::vector<double> l(200000);
    for (auto& x : l) x = rng.log_gamma_variate(shape);
    const auto m = testing::mean_se(l);
    CHECK(std::abs(m.mean - digamma) < 4 * m.se);
  }
  RandomStream rng(6);
  CHECK(std::isfinite(rng.log_gamma_variate(1e-6)));
}

TEST_CASE("frechet and pareto by inversion") {
  RandomStream rng(7);
  std::vector<double> f(50000);
  std::vector<double> p(50000);
  for (auto& x : f) x = rng.frechet(2.0, 1.5);
  for (auto& x : p) {
    x = rng.pareto();
    REQUIRE(x >= 1.0);
  }
  CHECK(testing::ks_statistic(f, [](double x) { return std::exp(-std::pow(x / 1.5, -2.0)); }) <
        testing::ks_critical_1pct(f.size()));
  CHECK(testing::ks_statistic(p, [](double x) { return 1.0 - 1.0 / x; }) <
        testing::ks_critical_1pct(p.size()));
}
