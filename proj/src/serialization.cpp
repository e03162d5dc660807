#include "extree/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "extree/error.hpp"
#include "extree/version.hpp"

namespace extree {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(Errc::ParseError, what); }

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    schema_error(std::string(what) + ": " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) schema_error("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

std::string edge_key(const Edge& e) { return std::to_string(e.u) + "-" + std::to_string(e.v); }

Edge parse_edge_key(const std::string& key) {
  const auto dash = key.find('-');
  if (dash == std::string::npos) schema_error("edge key '" + key + "' is not of the form u-v");
  std::size_t u = 0;
  std::size_t v = 0;
  const char* begin = key.data();
  const char* end = key.data() + key.size();
  const auto r1 = std::from_chars(begin, begin + dash, u);
  const auto r2 = std::from_chars(begin + dash + 1, end, v);
  if (r1.ec != std::errc() || r1.ptr != begin + dash || r2.ec != std::errc() || r2.ptr != end) {
    schema_error("edge key '" + key + "' is not of the form u-v");
  }
  return Edge(u, v);
}

std::vector<Edge> edges_from_json(const Json& j) {
  std::vector<Edge> edges;
  for (const Json& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) schema_error("each edge must be a pair [u, v]");
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return edges;
}

}  // namespace

Json tree_to_json(const LabeledTree& tree, const std::vector<std::string>& names) {
  Json j;
  j["d"] = tree.d();
  Json edges = Json::array();
  for (const Edge& e : tree.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  if (!names.empty()) {
    if (names.size() != tree.d()) throw Error(Errc::DimensionMismatch, "one name per node required");
    j["names"] = names;
  }
  return j;
}

NamedTree tree_from_json(const Json& j) {
  return guarded("tree", [&] {
    const auto d = field(j, "d").get<std::size_t>();
    NamedTree out{validate_tree(d, edges_from_json(j)), {}};
    if (j.contains("names")) {
      out.names = j["names"].get<std::vector<std::string>>();
      if (out.names.size() != d) throw Error(Errc::DimensionMismatch, "one name per node required");
    }
    return out;
  });
}

Json edge_model_to_json(const EdgeDistribution& e) {
  Json j;
  j["family"] = e.family();
  if (const auto* hr = std::get_if<HuslerReiss>(&e.params())) {
    j["gamma"] = hr->gamma;
  } else if (const auto* lg = std::get_if<Logistic>(&e.params())) {
    j["theta"] = lg->theta;
  } else {
    const auto& dr = std::get<Dirichlet>(e.params());
    j["alpha_u"] = dr.alpha_u;
    j["alpha_v"] = dr.alpha_v;
  }
  return j;
}

EdgeDistribution edge_model_from_json(const Json& j) {
  return guarded("edge model", [&] {
    const auto family = field(j, "family").get<std::string>();
    if (family == "husler_reiss") return EdgeDistribution::husler_reiss(field(j, "gamma").get<double>());
    if (family == "logistic") return EdgeDistribution::logistic(field(j, "theta").get<double>());
    if (family == "dirichlet") {
      return EdgeDistribution::dirichlet(field(j, "alpha_u").get<double>(),
                                         field(j, "alpha_v").get<double>());
    }
    throw Error(Errc::InvalidParameter, "unknown edge family '" + family + "'");
  });
}

Json model_to_json(const ExtremalTreeModel& model, const std::vector<std::string>& names) {
  Json j = tree_to_json(model.tree(), names);
  Json edge_models = Json::object();
  for (std::size_t i = 0; i < model.tree().edges().size(); ++i) {
    edge_models[edge_key(model.tree().edges()[i])] = edge_model_to_json(model.edge_model(i));
  }
  j["edge_models"] = std::move(edge_models);
  return j;
}

ExtremalTreeModel model_from_json(const Json& j, std::vector<std::string>* names) {
  return guarded("model", [&] {
    NamedTree named = tree_from_json(j);
    std::map<Edge, EdgeDistribution> edge_models;
    for (const auto& [key, value] : field(j, "edge_models").items()) {
      edge_models.emplace(parse_edge_key(key), edge_model_from_json(value));
    }
    if (names) *names = named.names;
    return ExtremalTreeModel(std::move(named.tree), edge_models);
  });
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  return guarded("matrix", [&] {
    if (!j.is_array()) schema_error("matrix must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        schema_error("matrix rows must have equal length");
      }
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
  });
}

Json variogram_to_json(const VariogramMatrix& g) {
  Json j;
  j["d"] = g.d();
  j["root"] = g.root() ? Json(*g.root()) : Json(nullptr);
  j["g"] = matrix_to_json(g.matrix());
  return j;
}

VariogramMatrix variogram_from_json(const Json& j) {
  return guarded("variogram", [&] {
    const auto d = field(j, "d").get<std::size_t>();
    std::optional<NodeId> root;
    if (!field(j, "root").is_null()) root = j["root"].get<NodeId>();
    Eigen::MatrixXd g = matrix_from_json(field(j, "g"));
    if (static_cast<std::size_t>(g.rows()) != d) throw Error(Errc::DimensionMismatch, "d does not match g");
    return VariogramMatrix(std::move(g), root);
  });
}

Json estimate_to_json(const VariogramEstimate& e) {
  Json j;
  j["d"] = e.d();
  j["root"] = e.root ? Json(*e.root) : Json(nullptr);
  j["g"] = matrix_to_json(e.g);
  j["k"] = e.k;
  j["n"] = e.n;
  if (e.weights) j["weights"] = *e.weights;
  return j;
}

VariogramEstimate estimate_from_json(const Json& j) {
  return guarded("variogram estimate", [&] {
    VariogramEstimate e;
    e.g = matrix_from_json(field(j, "g"));
    if (!field(j, "root").is_null()) e.root = j["root"].get<NodeId>();
    e.k = field(j, "k").get<std::size_t>();
    e.n = field(j, "n").get<std::size_t>();
    if (j.contains("weights")) e.weights = j["weights"].get<std::vector<double>>();
    if (field(j, "d").get<std::size_t>() != e.d()) throw Error(Errc::DimensionMismatch, "d does not match g");
    return e;
  });
}

Json fitted_to_json(const FittedHrTree& fit) {
  Json j;
  j["tree"] = tree_to_json(fit.tree);
  j["edge_gamma"] = fit.edge_gamma;
  j["full_gamma"] = matrix_to_json(fit.full_gamma);
  j["implied_chi"] = matrix_to_json(fit.implied_chi);
  j["k"] = fit.k;
  j["n"] = fit.n;
  return j;
}

FittedHrTree fitted_from_json(const Json& j) {
  return guarded("fitted tree", [&] {
    FittedHrTree fit{tree_from_json(field(j, "tree")).tree,
                     field(j, "edge_gamma").get<std::vector<double>>(),
                     matrix_from_json(field(j, "full_gamma")),
                     matrix_from_json(field(j, "implied_chi")),
                     field(j, "k").get<std::size_t>(),
                     field(j, "n").get<std::size_t>()};
    if (fit.edge_gamma.size() != fit.tree.edges().size()) {
      throw Error(Errc::DimensionMismatch, "one edge_gamma per tree edge required");
    }
    return fit;
  });
}

Json bootstrap_to_json(const BootstrapResult& b) {
  Json j;
  j["B"] = b.resamples;
  j["d"] = b.counts.rows();
  Json counts = Json::array();
  for (Eigen::Index r = 0; r < b.counts.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < b.counts.cols(); ++c) row.push_back(b.counts(r, c));
    counts.push_back(std::move(row));
  }
  j["counts"] = std::move(counts);
  j["frequency"] = matrix_to_json(b.frequency);
  return j;
}

BootstrapResult bootstrap_from_json(const Json& j) {
  return guarded("bootstrap", [&] {
    BootstrapResult b;
    b.resamples = field(j, "B").get<std::size_t>();
    const Eigen::MatrixXd counts = matrix_from_json(field(j, "counts"));
    b.counts = counts.cast<int>();
    b.frequency = matrix_from_json(field(j, "frequency"));
    return b;
  });
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["d"] = c.d;
  j["n_list"] = c.n_list;
  if (const auto* fixed = std::get_if<FixedK>(&c.k_rule)) {
    j["k_rule"] = {{"type", "fixed"}, {"k", fixed->k}};
  } else if (std::holds_alternative<PowerK>(c.k_rule)) {
    j["k_rule"] = {{"type", "power"}};
  } else {
    j["k_rule"] = {{"type", "fraction_grid"}, {"q", std::get<FractionGrid>(c.k_rule).q}};
  }
  if (std::holds_alternative<ModelM1>(c.family)) {
    j["model"] = {{"family", "M1"}};
  } else if (std::holds_alternative<ModelM2>(c.family)) {
    j["model"] = {{"family", "M2"}};
  } else {
    j["model"] = {{"family", "M1-fixed"}, {"lambda", std::get<ModelM1Fixed>(c.family).lambda}};
  }
  j["noise"] = c.noise == NoiseKind::N1 ? "N1" : "N2";
  Json methods = Json::array();
  for (LearnMethod m : c.methods) methods.push_back(to_string(m));
  j["methods"] = std::move(methods);
  j["repetitions"] = c.repetitions;
  j["seed"] = c.seed;
  j["gamma_root"] = c.gamma_root;
  if (!c.weights.empty()) j["weights"] = c.weights;
  j["tree_mode"] = c.tree_mode == RandomTreeMode::SequentialEdges ? "sequential" : "uniform";
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  return guarded("experiment config", [&] {
    ExperimentConfig c;
    c.d = field(j, "d").get<std::size_t>();
    c.n_list = field(j, "n_list").get<std::vector<std::size_t>>();
    if (j.contains("k_rule")) {
      const Json& rule = j["k_rule"];
      const auto type = field(rule, "type").get<std::string>();
      if (type == "fixed") {
        c.k_rule = FixedK{field(rule, "k").get<std::size_t>()};
      } else if (type == "power") {
        c.k_rule = PowerK{};
      } else if (type == "fraction_grid") {
        c.k_rule = FractionGrid{field(rule, "q").get<std::vector<double>>()};
      } else {
        schema_error("unknown k_rule type '" + type + "'");
      }
    }
    if (j.contains("model")) {
      const auto family = field(j["model"], "family").get<std::string>();
      if (family == "M1") {
        c.family = ModelM1{};
      } else if (family == "M2") {
        c.family = ModelM2{};
      } else if (family == "M1-fixed") {
        c.family = ModelM1Fixed{field(j["model"], "lambda").get<double>()};
      } else {
        schema_error("unknown model family '" + family + "'");
      }
    }
    if (j.contains("noise")) {
      const auto noise = j["noise"].get<std::string>();
      if (noise == "N1") {
        c.noise = NoiseKind::N1;
      } else if (noise == "N2") {
        c.noise = NoiseKind::N2;
      } else {
        schema_error("noise must be N1 or N2");
      }
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const Json& m : j["methods"]) c.methods.push_back(parse_learn_method(m.get<std::string>()));
    }
    if (j.contains("repetitions")) c.repetitions = j["repetitions"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("gamma_root")) c.gamma_root = j["gamma_root"].get<NodeId>();
    if (j.contains("weights")) c.weights = j["weights"].get<std::vector<double>>();
    if (j.contains("tree_mode")) {
      const auto mode = j["tree_mode"].get<std::string>();
      if (mode == "sequential") {
        c.tree_mode = RandomTreeMode::SequentialEdges;
      } else if (mode == "uniform") {
        c.tree_mode = RandomTreeMode::UniformSpanning;
      } else {
        schema_error("tree_mode must be sequential or uniform");
      }
    }
    c.validate();
    return c;
  });
}

Json with_version(Json j) {
  j["version"] = version_string();
  return j;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    schema_error(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_experiment_csv(std::ostream& out, const ExperimentResult& result) {
  out << "method,n,k,q,err_mean,err_se,srr_mean,srr_se,reps\n";
  for (const ExperimentCell& c : result.cells) {
    out << to_string(c.method) << ',' << c.n << ',' << c.k << ',' << format_double(c.q) << ','
        << format_double(c.err_mean) << ',' << format_double(c.err_se) << ','
        << format_double(c.srr_mean) << ',' << format_double(c.srr_se) << ',' << c.reps << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names) {
  const auto d = static_cast<std::size_t>(values.cols());
  if (!names.empty() && names.size() != d) {
    throw Error(Errc::DimensionMismatch, "one column name per variable required");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (i > 0) out << ',';
    out << (names.empty() ? "V" + std::to_string(i) : names[i]);
  }
  out << '\n';
  char buf[40];
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c > 0) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", values(r, c));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace extree
