#include "extree/sampling.hpp"

#include <cmath>
#include <string>

#include "extree/error.hpp"
#include "extree/parallel.hpp"

namespace extree {

double sample_edge_log_w(const EdgeDistribution& e, Orientation orientation, RandomStream& rng) {
  const auto& p = e.params();
  if (const auto* hr = std::get_if<HuslerReiss>(&p)) {
    return rng.normal(-0.5 * hr->gamma, std::sqrt(hr->gamma));
  }
  if (const auto* lg = std::get_if<Logistic>(&p)) {
    // U_to = (-log U)^(-theta) / G(1 - theta) and U_from = G0^(-theta) / G(1 - theta)
    // with G0 ~ Gamma(1 - theta, 1); the Gamma-function scales cancel in the ratio.
    const double theta = lg->theta;
    const double log_frechet = -theta * std::log(rng.exponential());
    const double log_g0 = rng.log_gamma_variate(1.0 - theta);
    return log_frechet + theta * log_g0;
  }
  const auto& dir = std::get<Dirichlet>(p);
  const double from = orientation == Orientation::Forward ? dir.alpha_u : dir.alpha_v;
  const double to = orientation == Orientation::Forward ? dir.alpha_v : dir.alpha_u;
  // U_to ~ Gamma(a_to, 1/a_to), U_from ~ Gamma(a_from + 1, 1/a_from).
  const double log_to = rng.log_gamma_variate(to) - std::log(to);
  const double log_from = rng.log_gamma_variate(from + 1.0) - std::log(from);
  return log_to - log_from;
}

double sample_edge_w(const EdgeDistribution& e, Orientation orientation, RandomStream& rng) {
  return std::exp(sample_edge_log_w(e, orientation, rng));
}

ExtremalFunctionSampler::ExtremalFunctionSampler(const ExtremalTreeModel& model) : model_(model) {
  rootings_.reserve(model_.d());
  for (NodeId m = 0; m < model_.d(); ++m) rootings_.push_back(root_tree(model_.tree(), m));
}

void ExtremalFunctionSampler::sample_log(NodeId m, RandomStream& rng, std::span<double> log_w,
                                         std::span<double> edge_log_w) const {
  const RootedTree& rooted = rootings_.at(m);
  log_w[m] = 0.0;
  for (std::size_t pos = 1; pos < rooted.order.size(); ++pos) {
    const NodeId t = rooted.order[pos];
    const NodeId s = rooted.parent[t];
    const std::size_t k = rooted.parent_edge[t];
    const double draw = sample_edge_log_w(model_.edge_model(k), orientation_of({s, t}), rng);
    if (!edge_log_w.empty()) edge_log_w[k] = draw;
    log_w[t] = log_w[s] + draw;
  }
}

void ExtremalFunctionSampler::sample(NodeId m, RandomStream& rng, std::span<double> w) const {
  sample_log(m, rng, w);
  for (double& x : w) x = std::exp(x);
}

std::vector<double> sample_w_vector(const ExtremalTreeModel& model, NodeId m, RandomStream& rng) {
  if (m >= model.d()) throw Error(Errc::NodeOutOfRange, "root " + std::to_string(m));
  const ExtremalFunctionSampler sampler(model);
  std::vector<double> w(model.d());
  sampler.sample(m, rng, w);
  return w;
}

Eigen::MatrixXd sample_y_rooted(const ExtremalTreeModel& model, NodeId m, std::size_t n_samples,
                                RandomStream& rng, const SamplingOptions& options) {
  if (m >= model.d()) throw Error(Errc::NodeOutOfRange, "root " + std::to_string(m));
  const ExtremalFunctionSampler sampler(model);
  const std::size_t d = model.d();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(d));
  parallel_for(n_samples, options.threads, [&](std::size_t r) {
    RandomStream row_rng = rng.substream(r);
    std::vector<double> w(d);
    sampler.sample(m, row_rng, w);
    const double p = row_rng.pareto();
    for (std::size_t i = 0; i < d; ++i) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = p * w[i];
    }
  });
  return out;
}

Eigen::MatrixXd sample_max_stable(std::size_t d, const ExtremalFunctionSource& source,
                                  std::size_t n_samples, RandomStream& rng,
                                  const SamplingOptions& options) {
  if (d == 0) throw Error(Errc::InvalidParameter, "dimension must be positive");
  const std::size_t cap = options.proposal_cap_per_dim * d;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(d));
  parallel_for(n_samples, options.threads, [&](std::size_t r) {
    RandomStream row_rng = rng.substream(r);
    std::vector<double> z(d, 0.0);
    std::vector<double> w(d);
    std::size_t proposals = 0;
    for (NodeId m = 0; m < d; ++m) {
      // Poisson points 1/zeta in decreasing order; stop once they fall below Z_m.
      double zeta = row_rng.exponential();
      while (1.0 / zeta > z[m]) {
        if (++proposals > cap) {
          throw Error(Errc::SamplerCapExceeded,
                      "row " + std::to_string(r) + " exceeded " + std::to_string(cap) +
                          " extremal-function proposals");
        }
        source(m, row_rng, w);
        bool fresh = true;
        for (NodeId j = 0; j < m && fresh; ++j) fresh = w[j] / zeta < z[j];
        if (fresh) {
          for (std::size_t j = 0; j < d; ++j) z[j] = std::max(z[j], w[j] / zeta);
        }
        zeta += row_rng.exponential();
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = z[j];
    }
  });
  return out;
}

Eigen::MatrixXd sample_max_stable(const ExtremalTreeModel& model, std::size_t n_samples,
                                  RandomStream& rng, const SamplingOptions& options) {
  const ExtremalFunctionSampler sampler(model);
  const ExtremalFunctionSource source = [&sampler](NodeId m, RandomStream& r,
                                                   std::span<double> w) { sampler.sample(m, r, w); };
  return sample_max_stable(model.d(), source, n_samples, rng, options);
}

Eigen::MatrixXd sample_noise(const NoiseSpec& spec, std::size_t n_samples, std::size_t d,
                             RandomStream& rng, const SamplingOptions& options) {
  if (const auto* tree_noise = std::get_if<TreeNoise>(&spec)) {
    if (tree_noise->noise_model.d() != d) {
      throw Error(Errc::DimensionMismatch, "noise model has dimension " +
                                               std::to_string(tree_noise->noise_model.d()) +
                                               ", data have " + std::to_string(d));
    }
    return sample_max_stable(tree_noise->noise_model, n_samples, rng, options).cwiseSqrt();
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(d));
  parallel_for(n_samples, options.threads, [&](std::size_t r) {
    RandomStream row_rng = rng.substream(r);
    for (std::size_t j = 0; j < d; ++j) {
      // sqrt of a standard Frechet variate has P(X <= x) = exp(-1/x^2).
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = row_rng.frechet(2.0);
    }
  });
  return out;
}

DataMatrix sample_domain_of_attraction(const ExtremalTreeModel& model, const NoiseSpec& spec,
                                       std::size_t n_samples, RandomStream& rng,
                                       const SamplingOptions& options) {
  RandomStream z_rng = rng.substream(0);
  RandomStream noise_rng = rng.substream(1);
  Eigen::MatrixXd z = sample_max_stable(model, n_samples, z_rng, options);
  z += sample_noise(spec, n_samples, model.d(), noise_rng, options);
  return DataMatrix(std::move(z));
}

}  // namespace extree
