#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "extree/model.hpp"
#include "extree/tree.hpp"

namespace extree {

/// Marginal pseudo-uniforms u = rank / (n + 1), computed column by column.
/// Ties receive consecutive ranks in increasing row order.
class RankMatrix {
 public:
  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  /// 1-based rank of row t in column i.
  std::size_t rank(std::size_t t, NodeId i) const { return ranks_[i * n_ + t]; }
  double u(std::size_t t, NodeId i) const {
    return static_cast<double>(rank(t, i)) / static_cast<double>(n_ + 1);
  }
  /// Rows holding the k largest values of column i, in increasing row order.
  std::vector<std::size_t> top_rows(NodeId i, std::size_t k) const;

 private:
  friend RankMatrix rank_transform(const DataMatrix& data);
  friend RankMatrix rank_transform(const Eigen::MatrixXd& data);
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<std::size_t> ranks_;  // column-major
};

RankMatrix rank_transform(const DataMatrix& data);
/// Same convention for any matrix with at least one row (used by the
/// bootstrap and the bindings before DataMatrix validation applies).
RankMatrix rank_transform(const Eigen::MatrixXd& data);

/// max(2, floor(n^0.8)), capped at n; the floor is exact for all n.
std::size_t default_k(std::size_t n);

/// round(q n) clamped to [2, n]; `clamped` reports whether clamping applied.
struct ClampedK {
  std::size_t k;
  bool clamped;
};
ClampedK k_from_fraction(double q, std::size_t n);
ClampedK clamp_k(long long k, std::size_t n);

/// Fraction of the k largest rows of column i that are also among the k
/// largest of column j. Throws KOutOfRange unless 1 <= k <= n.
double chi_hat(const RankMatrix& ranks, NodeId i, NodeId j, std::size_t k);

/// All pairwise chi_hat values (unit diagonal).
Eigen::MatrixXd chi_hat_matrix(const RankMatrix& ranks, std::size_t k);

struct ChiCurvePoint {
  double q;
  std::size_t k;
  double chi;
};

/// chi_hat at k = round(q n), clamped to [2, n], for each tail fraction q.
std::vector<ChiCurvePoint> chi_curve(const RankMatrix& ranks, NodeId i, NodeId j,
                                     std::span<const double> q_grid);

struct VariogramEstimate {
  Eigen::MatrixXd g;
  /// Empty for weighted combinations.
  std::optional<NodeId> root;
  std::size_t k = 0;
  std::size_t n = 0;
  /// Combination weights, present only for combined estimates.
  std::optional<std::vector<double>> weights;

  std::size_t d() const noexcept { return static_cast<std::size_t>(g.rows()); }
};

/// Empirical extremal variogram rooted at m from the k rows with the largest
/// values in column m: entry (i, j) is the variance, with denominator k, of
/// log(1 - u_i) - log(1 - u_j) over those rows. Requires 2 <= k <= n.
VariogramEstimate gamma_hat_rooted(const RankMatrix& ranks, NodeId m, std::size_t k);

/// sum_m w_m gamma_hat_rooted(m), accumulated in increasing m. An empty weight
/// vector means w_m = 1/d. Weights must be nonnegative with a positive maximum.
VariogramEstimate gamma_hat_combined(const RankMatrix& ranks, std::size_t k,
                                     std::span<const double> weights = {}, unsigned threads = 1);

}  // namespace extree
