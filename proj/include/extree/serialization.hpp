#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "extree/closed_form.hpp"
#include "extree/estimators.hpp"
#include "extree/experiments.hpp"
#include "extree/model.hpp"
#include "extree/tree.hpp"
#include "extree/tree_learn.hpp"

namespace extree {

using Json = nlohmann::json;

/// Tree with optional variable names (one per node).
struct NamedTree {
  LabeledTree tree;
  std::vector<std::string> names;
};

/// {"d", "edges": [[u, v], ...] with u < v sorted, "names" when non-empty}.
Json tree_to_json(const LabeledTree& tree, const std::vector<std::string>& names = {});
NamedTree tree_from_json(const Json& j);

Json edge_model_to_json(const EdgeDistribution& e);
EdgeDistribution edge_model_from_json(const Json& j);

/// Tree JSON plus {"edge_models": {"u-v": {"family": ..., parameters}}}.
Json model_to_json(const ExtremalTreeModel& model, const std::vector<std::string>& names = {});
ExtremalTreeModel model_from_json(const Json& j, std::vector<std::string>* names = nullptr);

Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

/// {"d", "root": int or null, "g"}.
Json variogram_to_json(const VariogramMatrix& g);
VariogramMatrix variogram_from_json(const Json& j);

/// Variogram schema plus "k", "n" and, for combinations, "weights".
Json estimate_to_json(const VariogramEstimate& e);
VariogramEstimate estimate_from_json(const Json& j);

/// {"tree", "edge_gamma", "full_gamma", "implied_chi", "k", "n"}.
Json fitted_to_json(const FittedHrTree& fit);
FittedHrTree fitted_from_json(const Json& j);

Json bootstrap_to_json(const BootstrapResult& b);
BootstrapResult bootstrap_from_json(const Json& j);

Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);

/// Adds {"version": ...} to a JSON object.
Json with_version(Json j);

/// Parses JSON text; syntax and schema errors become ParseError.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

/// method,n,k,q,err_mean,err_se,srr_mean,srr_se,reps
void write_experiment_csv(std::ostream& out, const ExperimentResult& result);

/// Header line of names (V0.. when empty), then one row per observation with
/// 17 significant digits.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names = {});

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace extree
