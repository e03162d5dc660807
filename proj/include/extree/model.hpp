#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "extree/tree.hpp"

namespace extree {

struct HuslerReiss {
  double gamma;
};

struct Logistic {
  double theta;
};

/// Shapes attached to the edge's endpoints, `alpha_u` to the smaller label.
struct Dirichlet {
  double alpha_u;
  double alpha_v;
};

/// Bivariate extremal-function family on one tree edge. Parameters are
/// validated on construction.
class EdgeDistribution {
 public:
  using Params = std::variant<HuslerReiss, Logistic, Dirichlet>;

  static EdgeDistribution husler_reiss(double gamma) { return EdgeDistribution(HuslerReiss{gamma}); }
  static EdgeDistribution logistic(double theta) { return EdgeDistribution(Logistic{theta}); }
  static EdgeDistribution dirichlet(double alpha_u, double alpha_v) {
    return EdgeDistribution(Dirichlet{alpha_u, alpha_v});
  }

  explicit EdgeDistribution(Params params);

  const Params& params() const noexcept { return params_; }
  std::string family() const;

 private:
  Params params_;
};

/// Orientation of an edge (u, v), u < v: Forward means u -> v.
enum class Orientation { Forward, Backward };

inline Orientation orientation_of(DirectedEdge e) {
  return e.from < e.to ? Orientation::Forward : Orientation::Backward;
}

/// A tree together with one edge distribution per tree edge.
class ExtremalTreeModel {
 public:
  /// `edge_models` must contain exactly the tree's edges.
  ExtremalTreeModel(LabeledTree tree, const std::map<Edge, EdgeDistribution>& edge_models);
  /// `edge_models[i]` belongs to tree.edges()[i].
  ExtremalTreeModel(LabeledTree tree, std::vector<EdgeDistribution> edge_models);

  const LabeledTree& tree() const noexcept { return tree_; }
  std::size_t d() const noexcept { return tree_.d(); }
  const EdgeDistribution& edge_model(std::size_t edge_index) const {
    return edge_models_.at(edge_index);
  }
  const EdgeDistribution& edge_model(Edge e) const;
  const std::vector<EdgeDistribution>& edge_models() const noexcept { return edge_models_; }

  /// Same family with parameter `gamma` on every edge.
  static ExtremalTreeModel all_husler_reiss(const LabeledTree& tree, double gamma);

 private:
  LabeledTree tree_;
  std::vector<EdgeDistribution> edge_models_;
};

/// n x d matrix of finite observations, n >= 2 and d >= 2.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd values);

  std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

 private:
  Eigen::MatrixXd values_;
};

}  // namespace extree
