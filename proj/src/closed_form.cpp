#include "extree/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "extree/error.hpp"
#include "extree/special_functions.hpp"

namespace extree {

VariogramMatrix::VariogramMatrix(Eigen::MatrixXd g, std::optional<NodeId> root)
    : g_(std::move(g)), root_(root) {
  if (g_.rows() != g_.cols()) throw Error(Errc::DimensionMismatch, "variogram not square");
  if (root_ && *root_ >= d()) throw Error(Errc::NodeOutOfRange, "variogram root");
  for (Eigen::Index i = 0; i < g_.rows(); ++i) {
    if (g_(i, i) != 0.0) throw Error(Errc::InvalidParameter, "variogram diagonal must be zero");
    for (Eigen::Index j = i + 1; j < g_.cols(); ++j) {
      if (!std::isfinite(g_(i, j))) throw Error(Errc::InvalidParameter, "non-finite variogram");
      if (g_(i, j) != g_(j, i)) throw Error(Errc::NotSymmetric, "variogram not symmetric");
      if (g_(i, j) < 0.0) throw Error(Errc::NegativeWeight, "negative variogram entry");
    }
  }
}

double edge_variogram(const EdgeDistribution& e, Orientation orientation) {
  const auto& p = e.params();
  if (const auto* hr = std::get_if<HuslerReiss>(&p)) return hr->gamma;
  if (const auto* lg = std::get_if<Logistic>(&p)) {
    const double t = lg->theta;
    return t * t * (trigamma(1.0 - t) + std::numbers::pi * std::numbers::pi / 6.0);
  }
  const auto& dir = std::get<Dirichlet>(p);
  const double from = orientation == Orientation::Forward ? dir.alpha_u : dir.alpha_v;
  const double to = orientation == Orientation::Forward ? dir.alpha_v : dir.alpha_u;
  return trigamma(from + 1.0) + trigamma(to);
}

Eigen::MatrixXd additive_tree_metric(const LabeledTree& tree, std::span<const double> edge_values) {
  if (edge_values.size() != tree.edges().size()) {
    throw Error(Errc::DimensionMismatch, "one value per tree edge required");
  }
  const std::size_t d = tree.d();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                            static_cast<Eigen::Index>(d));
  std::vector<double> dist(d);
  for (NodeId i = 0; i < d; ++i) {
    // Breadth-first accumulation from i sums each path in order i -> j.
    const RootedTree rooted = root_tree(tree, i);
    dist[i] = 0.0;
    for (std::size_t pos = 1; pos < rooted.order.size(); ++pos) {
      const NodeId t = rooted.order[pos];
      dist[t] = dist[rooted.parent[t]] + edge_values[rooted.parent_edge[t]];
    }
    for (NodeId j = i + 1; j < d; ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      g(a, b) = dist[j];
      g(b, a) = dist[j];
    }
  }
  return g;
}

VariogramMatrix model_variogram(const ExtremalTreeModel& model, NodeId m) {
  const RootedTree rooted = root_tree(model.tree(), m);
  std::vector<double> values(model.tree().edges().size());
  for (std::size_t pos = 1; pos < rooted.order.size(); ++pos) {
    const NodeId t = rooted.order[pos];
    const std::size_t k = rooted.parent_edge[t];
    values[k] = edge_variogram(model.edge_model(k), orientation_of({rooted.parent[t], t}));
  }
  return VariogramMatrix(additive_tree_metric(model.tree(), values), m);
}

double hr_chi_from_gamma(double gamma) {
  if (std::isnan(gamma)) throw Error(Errc::InvalidParameter, "gamma is NaN");
  if (gamma < 0.0) throw Error(Errc::NegativeGamma, "gamma = " + std::to_string(gamma));
  // 2 - 2 Phi(x) = 2 sf(x); erfc keeps full relative accuracy in the tail.
  return 2.0 * normal_sf(std::sqrt(gamma) / 2.0);
}

Eigen::MatrixXd sigma_from_gamma(const VariogramMatrix& g, NodeId m) {
  const std::size_t d = g.d();
  if (m >= d) throw Error(Errc::NodeOutOfRange, "root " + std::to_string(m));
  std::vector<NodeId> keep;
  for (NodeId v = 0; v < d; ++v) {
    if (v != m) keep.push_back(v);
  }
  const auto k = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd sigma(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      const NodeId i = keep[static_cast<std::size_t>(a)];
      const NodeId j = keep[static_cast<std::size_t>(b)];
      sigma(a, b) = 0.5 * (g(i, m) + g(j, m) - g(i, j));
    }
  }
  return sigma;
}

bool is_conditionally_negative_definite(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, "matrix not square");
  const Eigen::Index d = m.rows();
  if (!m.allFinite()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw Error(Errc::NotSymmetric, "matrix not symmetric");
      }
    }
  }
  if (d == 0) return true;
  const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d) -
                            Eigen::MatrixXd::Constant(d, d, 1.0 / static_cast<double>(d));
  const Eigen::MatrixXd centred = -0.5 * p * m * p;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centred, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

}  // namespace extree
