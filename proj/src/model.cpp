#include "extree/model.hpp"

#include <cmath>

#include "extree/error.hpp"

namespace extree {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

EdgeDistribution::EdgeDistribution(Params params) : params_(params) {
  if (const auto* hr = std::get_if<HuslerReiss>(&params_)) {
    if (!positive_finite(hr->gamma)) {
      throw Error(Errc::InvalidParameter, "Husler-Reiss gamma must be positive");
    }
  } else if (const auto* lg = std::get_if<Logistic>(&params_)) {
    if (!(lg->theta > 0.0 && lg->theta < 1.0)) {
      throw Error(Errc::InvalidParameter, "logistic theta must lie in (0, 1)");
    }
  } else if (const auto* dir = std::get_if<Dirichlet>(&params_)) {
    if (!positive_finite(dir->alpha_u) || !positive_finite(dir->alpha_v)) {
      throw Error(Errc::InvalidParameter, "Dirichlet shapes must be positive");
    }
  }
}

std::string EdgeDistribution::family() const {
  switch (params_.index()) {
    case 0: return "husler_reiss";
    case 1: return "logistic";
    default: return "dirichlet";
  }
}

ExtremalTreeModel::ExtremalTreeModel(LabeledTree tree,
                                     const std::map<Edge, EdgeDistribution>& edge_models)
    : tree_(std::move(tree)) {
  if (edge_models.size() != tree_.edges().size()) {
    throw Error(Errc::DimensionMismatch, "need exactly one edge model per tree edge");
  }
  edge_models_.reserve(edge_models.size());
  for (const Edge& e : tree_.edges()) {
    const auto it = edge_models.find(e);
    if (it == edge_models.end()) {
      throw Error(Errc::DimensionMismatch, "no edge model for edge (" + std::to_string(e.u) +
                                               "," + std::to_string(e.v) + ")");
    }
    edge_models_.push_back(it->second);
  }
}

ExtremalTreeModel::ExtremalTreeModel(LabeledTree tree, std::vector<EdgeDistribution> edge_models)
    : tree_(std::move(tree)), edge_models_(std::move(edge_models)) {
  if (edge_models_.size() != tree_.edges().size()) {
    throw Error(Errc::DimensionMismatch, "need exactly one edge model per tree edge");
  }
}

const EdgeDistribution& ExtremalTreeModel::edge_model(Edge e) const {
  const std::size_t idx = tree_.edge_index(e);
  if (idx == edge_models_.size()) throw Error(Errc::InvalidParameter, "edge not in tree");
  return edge_models_[idx];
}

ExtremalTreeModel ExtremalTreeModel::all_husler_reiss(const LabeledTree& tree, double gamma) {
  return ExtremalTreeModel(
      tree, std::vector<EdgeDistribution>(tree.edges().size(), EdgeDistribution::husler_reiss(gamma)));
}

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 2) throw Error(Errc::TooFewRows, "need at least 2 observations");
  if (values_.cols() < 2) throw Error(Errc::DimensionMismatch, "need at least 2 variables");
  if (!values_.allFinite()) throw Error(Errc::InvalidParameter, "data contain non-finite values");
}

}  // namespace extree
