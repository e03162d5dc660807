#pragma once

#include <cstddef>
#include <optional>

#include "extree/model.hpp"
#include "extree/random.hpp"
#include "extree/sampling.hpp"

namespace extree {

struct MonteCarloEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo extremal correlation chi_hl = E[min(prod W_e, 1)], the product
/// running over the path from h to l with edges oriented away from h.
/// Samples are drawn in fixed-size chunks on substreams, so the estimate does
/// not depend on `threads`.
MonteCarloEstimate mc_chi(const ExtremalTreeModel& model, NodeId h, NodeId l, std::size_t samples,
                          RandomStream& rng, unsigned threads = 1);

/// Data generator with known margins: X = Z, or X = Z + eps when `noise` is set,
/// Z the max-stable vector of `model`.
class MarginalGenerator {
 public:
  explicit MarginalGenerator(ExtremalTreeModel model, std::optional<NoiseSpec> noise = {});

  std::size_t d() const noexcept { return model_.d(); }
  const ExtremalTreeModel& model() const noexcept { return model_; }
  const std::optional<NoiseSpec>& noise() const noexcept { return noise_; }

  Eigen::MatrixXd sample(std::size_t n_samples, RandomStream& rng,
                         const SamplingOptions& options = {}) const;

  /// Marginal survival function 1 - F(x), identical for all coordinates.
  /// With noise it is the convolution of the Frechet(1) and Frechet(2) laws,
  /// evaluated by adaptive Gauss-Kronrod quadrature.
  double survival(double x) const;

  /// x with survival(x) = q.
  double upper_quantile(double q) const;

 private:
  ExtremalTreeModel model_;
  std::optional<NoiseSpec> noise_;
};

/// Monte-Carlo value of the pre-asymptotic variogram
///   Var[log(1 - F_i(X_i)) - log(1 - F_j(X_j)) | F_m(X_m) > 1 - q]
/// from `exceedances` draws of X conditioned on the event (by rejection, in
/// blocks of a fixed size on substreams). The standard error uses the sample
/// fourth central moment.
MonteCarloEstimate mc_variogram_pre(const MarginalGenerator& generator, NodeId m, NodeId i,
                                    NodeId j, double q, std::size_t exceedances,
                                    RandomStream& rng, unsigned threads = 1);

}  // namespace extree
