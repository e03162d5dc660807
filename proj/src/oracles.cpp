#include "extree/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "extree/error.hpp"
#include "extree/parallel.hpp"

namespace extree {

namespace {

constexpr std::size_t kChunk = 1U << 16;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

}  // namespace

MonteCarloEstimate mc_chi(const ExtremalTreeModel& model, NodeId h, NodeId l, std::size_t samples,
                          RandomStream& rng, unsigned threads) {
  if (h == l) throw Error(Errc::InvalidParameter, "mc_chi needs two distinct nodes");
  if (samples == 0) throw Error(Errc::InvalidParameter, "mc_chi needs at least one sample");
  const auto path = path_edges(model.tree(), h, l);
  std::vector<const EdgeDistribution*> edge_models;
  std::vector<Orientation> orientations;
  for (const DirectedEdge& e : path) {
    edge_models.push_back(&model.edge_model(e.undirected()));
    orientations.push_back(orientation_of(e));
  }

  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    RandomStream chunk_rng = rng.substream(c);
    const std::size_t count = std::min(kChunk, samples - c * kChunk);
    Moments acc;
    for (std::size_t s = 0; s < count; ++s) {
      double log_w = 0.0;
      for (std::size_t k = 0; k < path.size(); ++k) {
        log_w += sample_edge_log_w(*edge_models[k], orientations[k], chunk_rng);
      }
      const double x = std::min(std::exp(log_w), 1.0);
      acc.sum += x;
      acc.sum_sq += x * x;
    }
    partial[c] = acc;
  });

  Moments total;
  for (const Moments& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  const auto n = static_cast<double>(samples);
  const double mean = total.sum / n;
  const double var = std::max(0.0, total.sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n), samples};
}

MarginalGenerator::MarginalGenerator(ExtremalTreeModel model, std::optional<NoiseSpec> noise)
    : model_(std::move(model)), noise_(std::move(noise)) {
  if (noise_) {
    if (const auto* tn = std::get_if<TreeNoise>(&*noise_); tn && tn->noise_model.d() != d()) {
      throw Error(Errc::DimensionMismatch, "noise model dimension");
    }
  }
}

Eigen::MatrixXd MarginalGenerator::sample(std::size_t n_samples, RandomStream& rng,
                                          const SamplingOptions& options) const {
  if (!noise_) return sample_max_stable(model_, n_samples, rng, options);
  return sample_domain_of_attraction(model_, *noise_, n_samples, rng, options).values();
}

double MarginalGenerator::survival(double x) const {
  if (!(x > 0.0)) return 1.0;
  const double frechet_sf = -std::expm1(-1.0 / x);
  if (!noise_) return frechet_sf;
  // P(Z + eps > x) = P(eps >= x) + int_0^x P(Z > x - e) f_eps(e) de,
  // f_eps(e) = 2 e^-3 exp(-e^-2).
  const double noise_tail = -std::expm1(-1.0 / (x * x));
  auto integrand = [x](double e) {
    if (e < 0.05 || e >= x) return 0.0;
    const double density = 2.0 / (e * e * e) * std::exp(-1.0 / (e * e));
    return -std::expm1(-1.0 / (x - e)) * density;
  };
  const double body =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, x, 20, 1e-12);
  return noise_tail + body;
}

double MarginalGenerator::upper_quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw Error(Errc::InvalidParameter, "q must lie in (0, 1)");
  // Frechet(1) quantile as a starting bracket; noise only shifts it upwards.
  double lo = -1.0 / std::log1p(-q);
  if (!noise_) return lo;
  double hi = 2.0 * lo + 2.0;
  while (survival(hi) > q) hi *= 2.0;
  while (survival(lo) < q) lo *= 0.5;
  auto f = [this, q](double x) { return survival(x) - q; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iterations);
  return 0.5 * (a + b);
}

MonteCarloEstimate mc_variogram_pre(const MarginalGenerator& generator, NodeId m, NodeId i,
                                    NodeId j, double q, std::size_t exceedances,
                                    RandomStream& rng, unsigned threads) {
  const std::size_t d = generator.d();
  if (m >= d || i >= d || j >= d) throw Error(Errc::NodeOutOfRange, "variogram index");
  if (!(q > 0.0 && q < 1.0)) throw Error(Errc::InvalidParameter, "q must lie in (0, 1)");
  if (exceedances < 2) throw Error(Errc::InvalidParameter, "need at least 2 exceedances");
  if (i == j) return {0.0, 0.0, exceedances};

  const double threshold = generator.upper_quantile(q);
  const std::size_t block =
      std::clamp<std::size_t>(static_cast<std::size_t>(static_cast<double>(exceedances) / q / 8.0),
                              1024, 1U << 18);
  const SamplingOptions options{threads, SamplingOptions{}.proposal_cap_per_dim};
  const auto mi = static_cast<Eigen::Index>(m);
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);

  std::vector<double> diffs;
  diffs.reserve(exceedances);
  for (std::uint64_t b = 0; diffs.size() < exceedances; ++b) {
    RandomStream block_rng = rng.substream(b);
    const Eigen::MatrixXd x = generator.sample(block, block_rng, options);
    for (Eigen::Index r = 0; r < x.rows() && diffs.size() < exceedances; ++r) {
      if (x(r, mi) <= threshold) continue;
      diffs.push_back(std::log(generator.survival(x(r, ii))) -
                      std::log(generator.survival(x(r, jj))));
    }
  }

  const auto n = static_cast<double>(diffs.size());
  double mean = 0.0;
  for (double v : diffs) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : diffs) {
    const double c = (v - mean) * (v - mean);
    m2 += c;
    m4 += c * c;
  }
  m2 /= n;
  m4 /= n;
  return {m2, std::sqrt(std::max(0.0, m4 - m2 * m2) / n), diffs.size()};
}

}  // namespace extree
