#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "extree/random.hpp"

namespace extree {

/// 0-based node label, always < d of the enclosing structure.
using NodeId = std::size_t;

/// Undirected edge normalized so that u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Edge oriented from `from` to `to`.
struct DirectedEdge {
  NodeId from = 0;
  NodeId to = 0;

  DirectedEdge reversed() const { return {to, from}; }
  Edge undirected() const { return {from, to}; }

  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Undirected tree on d labeled nodes. Only obtainable through validate_tree
/// (or the generators below), so every instance satisfies the tree invariants.
class LabeledTree {
 public:
  std::size_t d() const noexcept { return adjacency_.size(); }
  /// The d-1 edges, each with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_.at(v); }
  /// Index of `e` in edges(), or edges().size() if absent.
  std::size_t edge_index(Edge e) const;
  bool contains(Edge e) const { return edge_index(e) < edges_.size(); }

  friend bool operator==(const LabeledTree& a, const LabeledTree& b) {
    return a.edges_ == b.edges_ && a.d() == b.d();
  }

 private:
  friend LabeledTree validate_tree(std::size_t d, std::span<const Edge> edges);
  LabeledTree() = default;

  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// Checks edge count, self loops, duplicates and connectivity (in that order)
/// and throws the matching Errc.
LabeledTree validate_tree(std::size_t d, std::span<const Edge> edges);

/// Unique simple path from i to j as edges directed away from i; empty iff i == j.
std::vector<DirectedEdge> path_edges(const LabeledTree& tree, NodeId i, NodeId j);

/// Directed view of a tree rooted at a node: a breadth-first order starting at
/// the root and, for every non-root node, its parent and the index of the
/// connecting edge in LabeledTree::edges().
struct RootedTree {
  NodeId root = 0;
  std::vector<NodeId> order;
  std::vector<NodeId> parent;
  std::vector<std::size_t> parent_edge;
};

RootedTree root_tree(const LabeledTree& tree, NodeId root);

enum class RandomTreeMode {
  /// Repeatedly add an edge drawn uniformly among the pairs that keep the
  /// graph acyclic. The induced law over trees is not uniform.
  SequentialEdges,
  /// Uniform over the d^(d-2) labeled trees via a random Pruefer sequence.
  UniformSpanning,
};

LabeledTree random_tree(std::size_t d, RandomStream& rng,
                        RandomTreeMode mode = RandomTreeMode::SequentialEdges);

/// Decodes a Pruefer sequence of length d-2 with entries in [0, d).
LabeledTree tree_from_pruefer(std::size_t d, std::span<const NodeId> sequence);

/// Edge-set equality; throws DimensionMismatch when the dimensions differ.
bool tree_equal(const LabeledTree& a, const LabeledTree& b);

/// Symmetric d x d matrix of pairwise distances with zero diagonal and entries
/// in [0, +inf].
class WeightMatrix {
 public:
  explicit WeightMatrix(Eigen::MatrixXd w);

  std::size_t d() const noexcept { return static_cast<std::size_t>(w_.rows()); }
  double operator()(NodeId i, NodeId j) const { return w_(static_cast<Eigen::Index>(i),
                                                          static_cast<Eigen::Index>(j)); }
  const Eigen::MatrixXd& matrix() const noexcept { return w_; }

 private:
  Eigen::MatrixXd w_;
};

/// Sum of the tree's edge weights, accumulated in increasing (weight, u, v) order.
double tree_weight(const LabeledTree& tree, const WeightMatrix& weights);

}  // namespace extree
