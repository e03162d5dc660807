#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "extree/closed_form.hpp"
#include "extree/estimators.hpp"
#include "extree/tree.hpp"

namespace extree {

/// Minimum spanning tree by Prim's algorithm started at node 0. Frontier edges
/// are compared by (weight, u, v), so among equal weights the lexicographically
/// smallest edge wins and the output is fully deterministic. +inf weights are
/// allowed; throws NoFiniteTree when every spanning tree has infinite weight.
LabeledTree mst(const WeightMatrix& weights);

/// Exhaustive search over all d^(d-2) labeled trees (d <= 8). Returns the
/// tree of minimum total weight; ties go to the tree whose edges, sorted by
/// (weight, u, v), form the lexicographically smallest sequence, which is the
/// tree mst() selects.
LabeledTree mst_bruteforce(const WeightMatrix& weights);

/// Weights -log(chi_hat); chi_hat = 0 becomes +inf.
WeightMatrix chi_weights(const Eigen::MatrixXd& chi);

/// MST over -log(chi_hat) at k exceedances.
LabeledTree learn_tree_chi(const RankMatrix& ranks, std::size_t k);

struct RootedGamma {
  NodeId root;
};
struct CombinedGamma {};
struct WeightedGamma {
  std::vector<double> weights;
};
using GammaMethod = std::variant<RootedGamma, CombinedGamma, WeightedGamma>;

/// MST over the empirical variogram rooted at a node, the uniform combination,
/// or a weighted combination.
LabeledTree learn_tree_gamma(const RankMatrix& ranks, const GammaMethod& method, std::size_t k,
                             unsigned threads = 1);

enum class LearnMethod { Chi, GammaRoot, GammaCombined, GammaWeighted };

/// "chi", "gamma-root", "gamma-combined" (alias "gamma"), "gamma-weighted".
std::string to_string(LearnMethod method);
LearnMethod parse_learn_method(std::string_view name);

/// A structure learner: the method plus its root or weights where relevant.
struct Learner {
  LearnMethod method = LearnMethod::GammaCombined;
  NodeId root = 0;
  std::vector<double> weights;
};

LabeledTree learn_tree(const RankMatrix& ranks, const Learner& learner, std::size_t k,
                       unsigned threads = 1);

struct FittedHrTree {
  LabeledTree tree;
  /// Indexed like tree.edges().
  std::vector<double> edge_gamma;
  /// Path sums of edge_gamma.
  Eigen::MatrixXd full_gamma;
  /// hr_chi_from_gamma(full_gamma), unit diagonal.
  Eigen::MatrixXd implied_chi;
  std::size_t k = 0;
  std::size_t n = 0;
};

/// Husler-Reiss tree fit: combined-variogram MST, edge parameters read off the
/// combined estimate, completed by additivity along tree paths.
FittedHrTree fit_hr_tree(const RankMatrix& ranks, std::size_t k, unsigned threads = 1);

}  // namespace extree
