#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "extree/closed_form.hpp"
#include "extree/error.hpp"
#include "extree/estimators.hpp"
#include "extree/experiments.hpp"
#include "extree/pipeline.hpp"
#include "extree/sampling.hpp"
#include "extree/serialization.hpp"
#include "extree/tree_learn.hpp"
#include "extree/version.hpp"

namespace py = pybind11;
using namespace extree;

namespace {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

EdgeList edge_list(const LabeledTree& tree) {
  EdgeList out;
  for (const Edge& e : tree.edges()) out.emplace_back(e.u, e.v);
  return out;
}

LabeledTree make_tree(std::size_t d, const EdgeList& edges) {
  std::vector<Edge> es;
  for (const auto& [u, v] : edges) es.emplace_back(u, v);
  return validate_tree(d, es);
}

RankMatrix ranks_of(const Eigen::MatrixXd& x) { return rank_transform(DataMatrix(x)); }

std::size_t k_or_default(std::optional<std::size_t> k, std::size_t n) {
  return k ? *k : default_k(n);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Extremal tree models: simulation, rank-based estimators, tree learning";
  m.attr("__version__") = EXTREE_VERSION;

  py::register_exception<Error>(m, "ExtreeError", PyExc_ValueError);

  py::class_<ExtremalTreeModel>(m, "Model")
      .def_static("from_json", [](const std::string& text) { return model_from_json(parse_json(text)); })
      .def_static("husler_reiss",
                  [](std::size_t d, const EdgeList& edges, double gamma) {
                    return ExtremalTreeModel::all_husler_reiss(make_tree(d, edges), gamma);
                  },
                  py::arg("d"), py::arg("edges"), py::arg("gamma"))
      .def("to_json", [](const ExtremalTreeModel& model) { return model_to_json(model).dump(); })
      .def_property_readonly("d", &ExtremalTreeModel::d)
      .def_property_readonly("edges", [](const ExtremalTreeModel& model) { return edge_list(model.tree()); });

  m.def("version", &version_string);

  m.def("validate_tree", [](std::size_t d, const EdgeList& edges) { return edge_list(make_tree(d, edges)); },
        py::arg("d"), py::arg("edges"));
  m.def("random_tree",
        [](std::size_t d, std::uint64_t seed, bool uniform) {
          RandomStream rng(seed);
          return edge_list(random_tree(d, rng, uniform ? RandomTreeMode::UniformSpanning
                                                       : RandomTreeMode::SequentialEdges));
        },
        py::arg("d"), py::arg("seed") = 0, py::arg("uniform") = false);
  m.def("mst", [](const Eigen::MatrixXd& w) { return edge_list(mst(WeightMatrix(w))); }, py::arg("weights"));

  m.def("hr_chi_from_gamma", &hr_chi_from_gamma, py::arg("gamma"));
  m.def("model_variogram", [](const ExtremalTreeModel& model, NodeId root) {
    return model_variogram(model, root).matrix();
  }, py::arg("model"), py::arg("root"));
  m.def("is_conditionally_negative_definite", &is_conditionally_negative_definite, py::arg("m"),
        py::arg("tol") = 1e-9);

  m.def("sample_max_stable",
        [](const ExtremalTreeModel& model, std::size_t n, std::uint64_t seed, unsigned threads) {
          RandomStream rng(seed);
          SamplingOptions opts;
          opts.threads = threads;
          py::gil_scoped_release release;
          return sample_max_stable(model, n, rng, opts);
        },
        py::arg("model"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1);
  m.def("sample_domain_of_attraction",
        [](const ExtremalTreeModel& model, std::size_t n, std::uint64_t seed, unsigned threads) {
          RandomStream rng(seed);
          SamplingOptions opts;
          opts.threads = threads;
          py::gil_scoped_release release;
          return Eigen::MatrixXd(sample_domain_of_attraction(model, IndependentNoise{}, n, rng, opts).values());
        },
        py::arg("model"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("default_k", &default_k, py::arg("n"));
  m.def("rank_transform", [](const Eigen::MatrixXd& x) {
    const RankMatrix r = ranks_of(x);
    Eigen::MatrixXd u(x.rows(), x.cols());
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
      for (Eigen::Index i = 0; i < x.cols(); ++i) {
        u(t, i) = r.u(static_cast<std::size_t>(t), static_cast<NodeId>(i));
      }
    }
    return u;
  }, py::arg("x"));
  m.def("chi_hat_matrix",
        [](const Eigen::MatrixXd& x, std::optional<std::size_t> k) {
          const RankMatrix r = ranks_of(x);
          return chi_hat_matrix(r, k_or_default(k, r.n()));
        },
        py::arg("x"), py::arg("k") = py::none());
  m.def("gamma_hat",
        [](const Eigen::MatrixXd& x, std::optional<std::size_t> k, std::optional<NodeId> root,
           std::vector<double> weights) {
          const RankMatrix r = ranks_of(x);
          const std::size_t kk = k_or_default(k, r.n());
          if (root) return gamma_hat_rooted(r, *root, kk).g;
          return gamma_hat_combined(r, kk, weights).g;
        },
        py::arg("x"), py::arg("k") = py::none(), py::arg("root") = py::none(),
        py::arg("weights") = std::vector<double>{});

  m.def("learn_tree",
        [](const Eigen::MatrixXd& x, std::optional<std::size_t> k, const std::string& method,
           NodeId root, std::vector<double> weights) {
          const RankMatrix r = ranks_of(x);
          const Learner learner{parse_learn_method(method), root, std::move(weights)};
          return edge_list(learn_tree(r, learner, k_or_default(k, r.n())));
        },
        py::arg("x"), py::arg("k") = py::none(), py::arg("method") = "gamma", py::arg("root") = 0,
        py::arg("weights") = std::vector<double>{});
  m.def("fit_hr_tree_json",
        [](const Eigen::MatrixXd& x, std::optional<std::size_t> k) {
          const RankMatrix r = ranks_of(x);
          return with_version(fitted_to_json(fit_hr_tree(r, k_or_default(k, r.n())))).dump();
        },
        py::arg("x"), py::arg("k") = py::none());

  m.def("run_experiment_csv",
        [](const std::string& config_json, unsigned threads) {
          const ExperimentConfig config = config_from_json(parse_json(config_json));
          ExperimentResult result;
          {
            py::gil_scoped_release release;
            result = run_experiment(config, threads);
          }
          std::ostringstream out;
          write_experiment_csv(out, result);
          return out.str();
        },
        py::arg("config_json"), py::arg("threads") = 1);

  m.def("run_pipeline_json",
        [](const Eigen::MatrixXd& x, std::vector<std::string> names, double q, std::size_t bootstrap,
           std::uint64_t seed, unsigned threads) {
          if (names.empty()) {
            for (Eigen::Index c = 0; c < x.cols(); ++c) names.push_back("V" + std::to_string(c));
          }
          PipelineOptions opts;
          opts.q = q;
          opts.bootstrap = bootstrap;
          opts.seed = seed;
          opts.threads = threads;
          return dump_json(report_to_json(run_pipeline(NamedData{DataMatrix(x), std::move(names)}, opts)));
        },
        py::arg("x"), py::arg("names") = std::vector<std::string>{}, py::arg("q") = 0.05,
        py::arg("bootstrap") = 0, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("parse_csv",
        [](const std::string& text, bool absolute) {
          CsvOptions opts;
          opts.absolute = absolute;
          NamedData d = parse_csv(text, opts);
          return std::make_pair(Eigen::MatrixXd(d.data.values()), d.names);
        },
        py::arg("text"), py::arg("absolute") = false);
}
