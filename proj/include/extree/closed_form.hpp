#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "extree/model.hpp"
#include "extree/tree.hpp"

namespace extree {

/// Symmetric, zero-diagonal, nonnegative finite matrix of extremal variogram
/// values. `root` is empty when the matrix does not depend on a root node
/// (Husler-Reiss parameter matrices, fitted trees, combined estimates).
class VariogramMatrix {
 public:
  VariogramMatrix(Eigen::MatrixXd g, std::optional<NodeId> root);

  std::size_t d() const noexcept { return static_cast<std::size_t>(g_.rows()); }
  const std::optional<NodeId>& root() const noexcept { return root_; }
  const Eigen::MatrixXd& matrix() const noexcept { return g_; }
  double operator()(NodeId i, NodeId j) const {
    return g_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Eigen::MatrixXd g_;
  std::optional<NodeId> root_;
};

/// Var(log W) for the edge's extremal function in the given orientation, i.e.
/// the edge's contribution to any variogram rooted on the `from` side:
///   Husler-Reiss(gamma)        gamma
///   Logistic(theta)            theta^2 (psi1(1 - theta) + pi^2 / 6)
///   Dirichlet(a_from, a_to)    psi1(a_from + 1) + psi1(a_to)
double edge_variogram(const EdgeDistribution& e, Orientation orientation);

/// Additive tree metric: entry (i, j) is the sum of `edge_values` over the
/// path from i to j, accumulated in path order starting at the smaller label.
/// `edge_values[k]` belongs to tree.edges()[k].
Eigen::MatrixXd additive_tree_metric(const LabeledTree& tree, std::span<const double> edge_values);

/// Extremal variogram of the model rooted at m: path sums of edge_variogram
/// with every edge oriented away from m.
VariogramMatrix model_variogram(const ExtremalTreeModel& model, NodeId m);

/// Extremal correlation of a Husler-Reiss pair, 2 - 2 Phi(sqrt(gamma) / 2).
double hr_chi_from_gamma(double gamma);

/// Sigma_ij = (G_im + G_jm - G_ij) / 2 over i, j != m, in increasing label order.
Eigen::MatrixXd sigma_from_gamma(const VariogramMatrix& g, NodeId m);

/// Whether -P M P / 2 (P the centring projector) has smallest eigenvalue >= -tol.
/// Matrices with non-finite entries are reported as not conditionally negative
/// definite. Throws NotSymmetric for asymmetric input.
bool is_conditionally_negative_definite(const Eigen::MatrixXd& m, double tol = 1e-9);

}  // namespace extree
