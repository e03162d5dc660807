#include "extree/tree_learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "extree/error.hpp"

namespace extree {

namespace {

using Key = std::tuple<double, NodeId, NodeId>;

Key key_of(const WeightMatrix& w, Edge e) { return {w(e.u, e.v), e.u, e.v}; }

}  // namespace

LabeledTree mst(const WeightMatrix& weights) {
  const std::size_t d = weights.d();
  if (d < 2) throw Error(Errc::InvalidParameter, "spanning trees need at least 2 nodes");
  std::vector<bool> in_tree(d, false);
  std::vector<Key> best(d);
  in_tree[0] = true;
  for (NodeId v = 1; v < d; ++v) best[v] = key_of(weights, Edge(0, v));

  std::vector<Edge> edges;
  edges.reserve(d - 1);
  for (std::size_t step = 1; step < d; ++step) {
    NodeId pick = d;
    for (NodeId v = 0; v < d; ++v) {
      if (!in_tree[v] && (pick == d || best[v] < best[pick])) pick = v;
    }
    const auto& [w, u, v] = best[pick];
    if (std::isinf(w)) {
      throw Error(Errc::NoFiniteTree, "every spanning tree has infinite weight (node " +
                                          std::to_string(pick) + " is only reachable at +inf)");
    }
    edges.emplace_back(u, v);
    in_tree[pick] = true;
    for (NodeId x = 0; x < d; ++x) {
      if (in_tree[x]) continue;
      const Key candidate = key_of(weights, Edge(pick, x));
      if (candidate < best[x]) best[x] = candidate;
    }
  }
  return validate_tree(d, edges);
}

LabeledTree mst_bruteforce(const WeightMatrix& weights) {
  const std::size_t d = weights.d();
  if (d < 2) throw Error(Errc::InvalidParameter, "spanning trees need at least 2 nodes");
  if (d > 8) throw Error(Errc::DimensionTooLarge, "brute force limited to d <= 8");

  std::vector<NodeId> sequence(d - 2, 0);
  std::vector<Key> keys;
  std::vector<Key> best_keys;
  double best_total = std::numeric_limits<double>::infinity();
  std::vector<Edge> best_edges;
  bool have_best = false;
  for (;;) {
    const LabeledTree tree = tree_from_pruefer(d, sequence);
    keys.clear();
    for (const Edge& e : tree.edges()) keys.push_back(key_of(weights, e));
    std::sort(keys.begin(), keys.end());
    double total = 0.0;
    for (const Key& k : keys) total += std::get<0>(k);
    if (!have_best || total < best_total || (total == best_total && keys < best_keys)) {
      have_best = true;
      best_total = total;
      best_keys = keys;
      best_edges = tree.edges();
    }
    // Odometer increment over [0, d)^(d-2).
    std::size_t pos = 0;
    while (pos < sequence.size() && ++sequence[pos] == d) sequence[pos++] = 0;
    if (pos == sequence.size()) break;
  }
  if (std::isinf(best_total)) {
    throw Error(Errc::NoFiniteTree, "every spanning tree has infinite weight");
  }
  return validate_tree(d, best_edges);
}

WeightMatrix chi_weights(const Eigen::MatrixXd& chi) {
  Eigen::MatrixXd w(chi.rows(), chi.cols());
  for (Eigen::Index i = 0; i < chi.rows(); ++i) {
    for (Eigen::Index j = 0; j < chi.cols(); ++j) {
      const double c = chi(i, j);
      if (i == j || c >= 1.0) {
        w(i, j) = 0.0;
      } else if (c <= 0.0) {
        w(i, j) = std::numeric_limits<double>::infinity();
      } else {
        w(i, j) = -std::log(c);
      }
    }
  }
  return WeightMatrix(std::move(w));
}

LabeledTree learn_tree_chi(const RankMatrix& ranks, std::size_t k) {
  return mst(chi_weights(chi_hat_matrix(ranks, k)));
}

LabeledTree learn_tree_gamma(const RankMatrix& ranks, const GammaMethod& method, std::size_t k,
                             unsigned threads) {
  if (const auto* rooted = std::get_if<RootedGamma>(&method)) {
    return mst(WeightMatrix(gamma_hat_rooted(ranks, rooted->root, k).g));
  }
  if (const auto* weighted = std::get_if<WeightedGamma>(&method)) {
    if (weighted->weights.empty()) throw Error(Errc::AllZeroWeights, "empty weight vector");
    return mst(WeightMatrix(gamma_hat_combined(ranks, k, weighted->weights, threads).g));
  }
  return mst(WeightMatrix(gamma_hat_combined(ranks, k, {}, threads).g));
}

std::string to_string(LearnMethod method) {
  switch (method) {
    case LearnMethod::Chi: return "chi";
    case LearnMethod::GammaRoot: return "gamma-root";
    case LearnMethod::GammaCombined: return "gamma-combined";
    case LearnMethod::GammaWeighted: return "gamma-weighted";
  }
  return "unknown";
}

LearnMethod parse_learn_method(std::string_view name) {
  if (name == "chi") return LearnMethod::Chi;
  if (name == "gamma-root") return LearnMethod::GammaRoot;
  if (name == "gamma-combined" || name == "gamma") return LearnMethod::GammaCombined;
  if (name == "gamma-weighted") return LearnMethod::GammaWeighted;
  throw Error(Errc::InvalidParameter, "unknown learning method '" + std::string(name) + "'");
}

LabeledTree learn_tree(const RankMatrix& ranks, const Learner& learner, std::size_t k,
                       unsigned threads) {
  switch (learner.method) {
    case LearnMethod::Chi: return learn_tree_chi(ranks, k);
    case LearnMethod::GammaRoot: return learn_tree_gamma(ranks, RootedGamma{learner.root}, k);
    case LearnMethod::GammaCombined: return learn_tree_gamma(ranks, CombinedGamma{}, k, threads);
    case LearnMethod::GammaWeighted:
      return learn_tree_gamma(ranks, WeightedGamma{learner.weights}, k, threads);
  }
  throw Error(Errc::InvalidParameter, "unknown learning method");
}

FittedHrTree fit_hr_tree(const RankMatrix& ranks, std::size_t k, unsigned threads) {
  const VariogramEstimate combined = gamma_hat_combined(ranks, k, {}, threads);
  FittedHrTree fit{mst(WeightMatrix(combined.g)), {}, {}, {}, k, ranks.n()};
  for (const Edge& e : fit.tree.edges()) {
    fit.edge_gamma.push_back(combined.g(static_cast<Eigen::Index>(e.u),
                                        static_cast<Eigen::Index>(e.v)));
  }
  fit.full_gamma = additive_tree_metric(fit.tree, fit.edge_gamma);
  fit.implied_chi = fit.full_gamma.unaryExpr([](double g) { return hr_chi_from_gamma(g); });
  return fit;
}

}  // namespace extree
