#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "extree/model.hpp"
#include "extree/random.hpp"

namespace extree {

/// Independent noise entries.
struct IndependentNoise {};

/// Noise with the dependence of a max-stable tree model on a fixed noise tree.
struct TreeNoise {
  ExtremalTreeModel noise_model;
};

/// Both variants have margins P(eps <= x) = exp(-1/x^2).
using NoiseSpec = std::variant<IndependentNoise, TreeNoise>;

struct SamplingOptions {
  unsigned threads = 1;
  /// Maximum extremal-function proposals per max-stable row is cap_per_dim * d.
  std::size_t proposal_cap_per_dim = 10000;
};

/// log W for one draw of the edge's extremal function in the given orientation.
double sample_edge_log_w(const EdgeDistribution& e, Orientation orientation, RandomStream& rng);

/// One draw of the edge's extremal function, exp(sample_edge_log_w(...)).
double sample_edge_w(const EdgeDistribution& e, Orientation orientation, RandomStream& rng);

/// Draws extremal functions W^m of a tree model. Rootings for all d nodes are
/// prepared once, so repeated draws only walk the tree.
class ExtremalFunctionSampler {
 public:
  explicit ExtremalFunctionSampler(const ExtremalTreeModel& model);

  std::size_t d() const noexcept { return model_.d(); }
  const ExtremalTreeModel& model() const noexcept { return model_; }

  /// Fills log W^m into `log_w`: entry m is 0 and every other entry is the sum
  /// of the log edge draws along the path from m. When `edge_log_w` is not
  /// empty it receives the per-edge draws indexed like tree().edges().
  void sample_log(NodeId m, RandomStream& rng, std::span<double> log_w,
                  std::span<double> edge_log_w = {}) const;

  /// Fills W^m into `w`.
  void sample(NodeId m, RandomStream& rng, std::span<double> w) const;

 private:
  ExtremalTreeModel model_;
  std::vector<RootedTree> rootings_;
};

/// Extremal function W^m: W_m = 1, W_i = product of edge draws along the path.
std::vector<double> sample_w_vector(const ExtremalTreeModel& model, NodeId m, RandomStream& rng);

/// Rooted Pareto vector Y^m = P W^m, one row per sample.
Eigen::MatrixXd sample_y_rooted(const ExtremalTreeModel& model, NodeId m, std::size_t n_samples,
                                RandomStream& rng, const SamplingOptions& options = {});

/// Source of extremal functions for the generic max-stable sampler: writes W^m
/// into the output span.
using ExtremalFunctionSource = std::function<void(NodeId, RandomStream&, std::span<double>)>;

/// Exact simulation of the max-stable vector with standard Frechet margins
/// associated to a family of extremal functions (extremal-functions algorithm).
/// Row r uses rng.substream(r). Throws SamplerCapExceeded when a row needs more
/// than proposal_cap_per_dim * d proposals.
Eigen::MatrixXd sample_max_stable(std::size_t d, const ExtremalFunctionSource& source,
                                  std::size_t n_samples, RandomStream& rng,
                                  const SamplingOptions& options = {});

Eigen::MatrixXd sample_max_stable(const ExtremalTreeModel& model, std::size_t n_samples,
                                  RandomStream& rng, const SamplingOptions& options = {});

/// Noise with margins exp(-1/x^2): sqrt of standard Frechet draws, independent
/// (IndependentNoise) or taken from the noise model's max-stable vector.
Eigen::MatrixXd sample_noise(const NoiseSpec& spec, std::size_t n_samples, std::size_t d,
                             RandomStream& rng, const SamplingOptions& options = {});

/// X = Z + eps with Z from sample_max_stable (substream 0) and eps from
/// sample_noise (substream 1).
DataMatrix sample_domain_of_attraction(const ExtremalTreeModel& model, const NoiseSpec& spec,
                                       std::size_t n_samples, RandomStream& rng,
                                       const SamplingOptions& options = {});

}  // namespace extree
