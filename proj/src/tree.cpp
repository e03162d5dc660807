#include "extree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "extree/error.hpp"

namespace extree {

namespace {

// Minimal union-find with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::size_t LabeledTree::edge_index(Edge e) const {
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) return edges_.size();
  return static_cast<std::size_t>(it - edges_.begin());
}

LabeledTree validate_tree(std::size_t d, std::span<const Edge> edges) {
  if (d < 2) throw Error(Errc::InvalidParameter, "a tree needs at least 2 nodes");
  if (edges.size() != d - 1) {
    throw Error(Errc::WrongEdgeCount, "expected " + std::to_string(d - 1) + " edges, got " +
                                          std::to_string(edges.size()));
  }
  for (const Edge& e : edges) {
    if (e.v >= d) {
      throw Error(Errc::NodeOutOfRange, "node " + std::to_string(e.v) + " >= d = " +
                                            std::to_string(d));
    }
    if (e.u == e.v) throw Error(Errc::SelfLoop, "self loop at node " + std::to_string(e.u));
  }
  std::vector<Edge> sorted(edges.begin(), edges.end());
  std::sort(sorted.begin(), sorted.end());
  if (const auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw Error(Errc::DuplicateEdge,
                "edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ") repeated");
  }
  DisjointSets sets(d);
  for (const Edge& e : sorted) sets.unite(e.u, e.v);
  for (NodeId v = 1; v < d; ++v) {
    if (sets.find(v) != 0) {
      throw Error(Errc::Disconnected, "node " + std::to_string(v) + " unreachable from node 0");
    }
  }

  LabeledTree tree;
  tree.adjacency_.assign(d, {});
  for (const Edge& e : sorted) {
    tree.adjacency_[e.u].push_back(e.v);
    tree.adjacency_[e.v].push_back(e.u);
  }
  for (auto& nbrs : tree.adjacency_) std::sort(nbrs.begin(), nbrs.end());
  tree.edges_ = std::move(sorted);
  return tree;
}

RootedTree root_tree(const LabeledTree& tree, NodeId root) {
  const std::size_t d = tree.d();
  if (root >= d) throw Error(Errc::NodeOutOfRange, "root " + std::to_string(root));
  RootedTree rooted;
  rooted.root = root;
  rooted.parent.assign(d, root);
  rooted.parent_edge.assign(d, tree.edges().size());
  rooted.order.reserve(d);
  rooted.order.push_back(root);
  std::vector<bool> seen(d, false);
  seen[root] = true;
  for (std::size_t head = 0; head < rooted.order.size(); ++head) {
    const NodeId s = rooted.order[head];
    for (NodeId t : tree.neighbors(s)) {
      if (seen[t]) continue;
      seen[t] = true;
      rooted.parent[t] = s;
      rooted.parent_edge[t] = tree.edge_index(Edge(s, t));
      rooted.order.push_back(t);
    }
  }
  return rooted;
}

std::vector<DirectedEdge> path_edges(const LabeledTree& tree, NodeId i, NodeId j) {
  if (i >= tree.d() || j >= tree.d()) {
    throw Error(Errc::NodeOutOfRange, "path endpoint outside the tree");
  }
  if (i == j) return {};
  // Root at j and walk parents from i: the walk runs i -> ... -> j.
  const RootedTree rooted = root_tree(tree, j);
  std::vector<DirectedEdge> path;
  for (NodeId v = i; v != j; v = rooted.parent[v]) path.push_back({v, rooted.parent[v]});
  return path;
}

LabeledTree tree_from_pruefer(std::size_t d, std::span<const NodeId> sequence) {
  if (d < 2) throw Error(Errc::InvalidParameter, "a tree needs at least 2 nodes");
  if (sequence.size() != d - 2) {
    throw Error(Errc::InvalidParameter, "Pruefer sequence must have length d-2");
  }
  std::vector<std::size_t> degree(d, 1);
  for (NodeId v : sequence) {
    if (v >= d) throw Error(Errc::NodeOutOfRange, "Pruefer entry " + std::to_string(v));
    ++degree[v];
  }
  std::vector<Edge> edges;
  edges.reserve(d - 1);
  // Linear-time decoding: `leaf` is the smallest current leaf.
  NodeId ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  NodeId leaf = ptr;
  for (NodeId v : sequence) {
    edges.emplace_back(leaf, v);
    if (--degree[v] == 1 && v < ptr) {
      leaf = v;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(leaf, d - 1);
  return validate_tree(d, edges);
}

LabeledTree random_tree(std::size_t d, RandomStream& rng, RandomTreeMode mode) {
  if (d < 2) throw Error(Errc::InvalidParameter, "a tree needs at least 2 nodes");
  if (mode == RandomTreeMode::UniformSpanning) {
    std::vector<NodeId> sequence(d - 2);
    for (auto& v : sequence) v = rng.uniform_index(d);
    return tree_from_pruefer(d, sequence);
  }
  DisjointSets sets(d);
  std::vector<Edge> edges;
  std::vector<Edge> admissible;
  while (edges.size() + 1 < d) {
    admissible.clear();
    for (NodeId a = 0; a < d; ++a) {
      for (NodeId b = a + 1; b < d; ++b) {
        if (sets.find(a) != sets.find(b)) admissible.emplace_back(a, b);
      }
    }
    const Edge pick = admissible[rng.uniform_index(admissible.size())];
    sets.unite(pick.u, pick.v);
    edges.push_back(pick);
  }
  return validate_tree(d, edges);
}

bool tree_equal(const LabeledTree& a, const LabeledTree& b) {
  if (a.d() != b.d()) {
    throw Error(Errc::DimensionMismatch, "trees of dimension " + std::to_string(a.d()) +
                                             " and " + std::to_string(b.d()));
  }
  return a.edges() == b.edges();
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() != w_.cols()) throw Error(Errc::DimensionMismatch, "weight matrix not square");
  const Eigen::Index d = w_.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (w_(i, i) != 0.0) throw Error(Errc::InvalidParameter, "nonzero diagonal weight");
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double a = w_(i, j);
      const double b = w_(j, i);
      if (std::isnan(a) || std::isnan(b)) throw Error(Errc::InvalidParameter, "NaN weight");
      if (a != b) throw Error(Errc::NotSymmetric, "weight matrix is not symmetric");
      if (a < 0.0) throw Error(Errc::NegativeWeight, "negative weight");
    }
  }
}

double tree_weight(const LabeledTree& tree, const WeightMatrix& weights) {
  if (tree.d() != weights.d()) throw Error(Errc::DimensionMismatch, "tree vs weights");
  std::vector<std::pair<double, Edge>> keyed;
  keyed.reserve(tree.edges().size());
  for (const Edge& e : tree.edges()) keyed.emplace_back(weights(e.u, e.v), e);
  std::sort(keyed.begin(), keyed.end());
  double total = 0.0;
  for (const auto& [w, e] : keyed) total += w;
  return total;
}

}  // namespace extree
