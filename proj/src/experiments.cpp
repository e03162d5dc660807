#include "extree/experiments.hpp"

#include <cmath>
#include <string>

#include "extree/error.hpp"
#include "extree/estimators.hpp"
#include "extree/parallel.hpp"

namespace extree {

ExtremalTreeModel gen_model_m1(const LabeledTree& tree, RandomStream& rng) {
  std::vector<EdgeDistribution> edges;
  edges.reserve(tree.edges().size());
  for (std::size_t e = 0; e < tree.edges().size(); ++e) {
    edges.push_back(EdgeDistribution::husler_reiss(rng.uniform(0.2, 1.0)));
  }
  return ExtremalTreeModel(tree, std::move(edges));
}

ExtremalTreeModel gen_model_m1_fixed(const LabeledTree& tree, double lambda) {
  return ExtremalTreeModel::all_husler_reiss(tree, lambda);
}

ExtremalTreeModel gen_model_m2(const LabeledTree& tree, RandomStream& rng) {
  std::vector<EdgeDistribution> edges;
  edges.reserve(tree.edges().size());
  for (std::size_t e = 0; e < tree.edges().size(); ++e) {
    const double alpha_u = rng.uniform(1.0, 10.0);
    const double alpha_v = rng.uniform(1.0, 10.0);
    edges.push_back(EdgeDistribution::dirichlet(alpha_u, alpha_v));
  }
  return ExtremalTreeModel(tree, std::move(edges));
}

double edge_error(const LabeledTree& true_tree, const LabeledTree& est_tree) {
  if (true_tree.d() != est_tree.d()) {
    throw Error(Errc::DimensionMismatch, "trees of different dimension");
  }
  std::size_t shared = 0;
  for (const Edge& e : est_tree.edges()) shared += true_tree.contains(e) ? 1 : 0;
  const auto edges = static_cast<double>(true_tree.edges().size());
  return 1.0 - static_cast<double>(shared) / edges;
}

void ExperimentConfig::validate() const {
  if (d < 2) throw Error(Errc::InvalidParameter, "experiment dimension must be >= 2");
  if (n_list.empty()) throw Error(Errc::InvalidParameter, "n_list is empty");
  for (std::size_t n : n_list) {
    if (n < 2) throw Error(Errc::InvalidParameter, "every n must be >= 2");
  }
  if (methods.empty()) throw Error(Errc::InvalidParameter, "method list is empty");
  if (repetitions < 1) throw Error(Errc::InvalidParameter, "repetitions must be >= 1");
  if (gamma_root >= d) throw Error(Errc::NodeOutOfRange, "gamma_root outside the tree");
  if (!weights.empty() && weights.size() != d) {
    throw Error(Errc::DimensionMismatch, "weights need one entry per variable");
  }
  if (const auto* grid = std::get_if<FractionGrid>(&k_rule)) {
    if (grid->q.empty()) throw Error(Errc::InvalidParameter, "q grid is empty");
    for (double q : grid->q) {
      if (!(q > 0.0 && q <= 1.0)) throw Error(Errc::InvalidParameter, "q grid outside (0, 1]");
    }
  }
  if (const auto* fixed = std::get_if<ModelM1Fixed>(&family); fixed && !(fixed->lambda > 0.0)) {
    throw Error(Errc::InvalidParameter, "lambda must be positive");
  }
}

std::vector<std::size_t> k_values(const KRule& rule, std::size_t n) {
  if (const auto* fixed = std::get_if<FixedK>(&rule)) {
    return {clamp_k(static_cast<long long>(fixed->k), n).k};
  }
  if (std::holds_alternative<PowerK>(rule)) return {default_k(n)};
  std::vector<std::size_t> ks;
  for (double q : std::get<FractionGrid>(rule).q) ks.push_back(k_from_fraction(q, n).k);
  return ks;
}

namespace {

ExtremalTreeModel generate_model(const ExperimentConfig& config, const LabeledTree& tree,
                                 RandomStream& rng) {
  if (std::holds_alternative<ModelM2>(config.family)) return gen_model_m2(tree, rng);
  if (const auto* fixed = std::get_if<ModelM1Fixed>(&config.family)) {
    return gen_model_m1_fixed(tree, fixed->lambda);
  }
  return gen_model_m1(tree, rng);
}

Learner learner_for(const ExperimentConfig& config, LearnMethod method) {
  return Learner{method, config.gamma_root, config.weights};
}

}  // namespace

RepetitionOutcome run_repetition(const ExperimentConfig& config, std::size_t r) {
  const RandomStream rng(config.seed, r);
  RandomStream tree_rng = rng.substream(0);
  RandomStream model_rng = rng.substream(1);
  const LabeledTree tree = random_tree(config.d, tree_rng, config.tree_mode);
  const ExtremalTreeModel model = generate_model(config, tree, model_rng);

  NoiseSpec noise = IndependentNoise{};
  if (config.noise == NoiseKind::N2) {
    RandomStream noise_tree_rng = rng.substream(2);
    RandomStream noise_model_rng = rng.substream(3);
    const LabeledTree noise_tree = random_tree(config.d, noise_tree_rng, config.tree_mode);
    noise = TreeNoise{gen_model_m1(noise_tree, noise_model_rng)};
  }

  RepetitionOutcome out;
  for (std::size_t a = 0; a < config.n_list.size(); ++a) {
    const std::size_t n = config.n_list[a];
    const std::vector<std::size_t> ks = k_values(config.k_rule, n);
    RandomStream data_rng = rng.substream(100 + a);
    std::optional<RankMatrix> ranks;
    std::string data_error;
    try {
      ranks = rank_transform(sample_domain_of_attraction(model, noise, n, data_rng));
    } catch (const Error& e) {
      data_error = e.what();
    }
    for (std::size_t k : ks) {
      for (LearnMethod method : config.methods) {
        double err = 1.0;
        bool recovered = false;
        bool failed = true;
        try {
          if (!ranks) throw Error(Errc::SamplerCapExceeded, data_error);
          const LabeledTree est = learn_tree(*ranks, learner_for(config, method), k);
          err = edge_error(tree, est);
          recovered = tree_equal(tree, est);
          failed = false;
        } catch (const Error& e) {
          out.log.push_back("repetition " + std::to_string(r) + ", n=" + std::to_string(n) +
                            ", k=" + std::to_string(k) + ", " + to_string(method) + ": " +
                            e.what());
        }
        out.edge_error.push_back(err);
        out.recovered.push_back(recovered);
        out.failed.push_back(failed);
      }
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  std::vector<RepetitionOutcome> outcomes(config.repetitions);
  parallel_for(config.repetitions, threads,
               [&](std::size_t r) { outcomes[r] = run_repetition(config, r); });

  ExperimentResult result;
  std::size_t slot = 0;
  const auto reps = static_cast<double>(config.repetitions);
  for (std::size_t n : config.n_list) {
    for (std::size_t k : k_values(config.k_rule, n)) {
      for (LearnMethod method : config.methods) {
        double err_sum = 0.0;
        double err_sq = 0.0;
        std::size_t misses = 0;
        std::size_t failures = 0;
        for (const RepetitionOutcome& o : outcomes) {
          err_sum += o.edge_error[slot];
          err_sq += o.edge_error[slot] * o.edge_error[slot];
          misses += o.recovered[slot] ? 0 : 1;
          failures += o.failed[slot] ? 1 : 0;
        }
        const double err_mean = err_sum / reps;
        const double err_var = std::max(0.0, err_sq / reps - err_mean * err_mean);
        const double srr_mean = static_cast<double>(misses) / reps;
        const double srr_var = srr_mean * (1.0 - srr_mean);
        result.cells.push_back({method, n, k, static_cast<double>(k) / static_cast<double>(n),
                                err_mean, std::sqrt(err_var / reps), srr_mean,
                                std::sqrt(srr_var / reps), config.repetitions, failures});
        ++slot;
      }
    }
  }
  for (const RepetitionOutcome& o : outcomes) {
    result.log.insert(result.log.end(), o.log.begin(), o.log.end());
  }
  return result;
}

BootstrapResult bootstrap_stability(const DataMatrix& data, std::size_t k, std::size_t resamples,
                                    const Learner& learner, RandomStream& rng, unsigned threads) {
  if (resamples < 1) throw Error(Errc::InvalidParameter, "need at least one bootstrap resample");
  const std::size_t n = data.n();
  const std::size_t d = data.d();
  const Eigen::MatrixXd& x = data.values();
  std::vector<std::vector<Edge>> trees(resamples);
  parallel_for(resamples, threads, [&](std::size_t b) {
    RandomStream b_rng = rng.substream(b);
    Eigen::MatrixXd resampled(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      resampled.row(r) = x.row(static_cast<Eigen::Index>(b_rng.uniform_index(n)));
    }
    trees[b] = learn_tree(rank_transform(resampled), learner, k).edges();
  });

  const auto dd = static_cast<Eigen::Index>(d);
  BootstrapResult out{resamples, Eigen::MatrixXi::Zero(dd, dd), {}};
  for (const auto& edges : trees) {
    for (const Edge& e : edges) {
      const auto u = static_cast<Eigen::Index>(e.u);
      const auto v = static_cast<Eigen::Index>(e.v);
      ++out.counts(u, v);
      ++out.counts(v, u);
    }
  }
  out.frequency = out.counts.cast<double>() / static_cast<double>(resamples);
  return out;
}

}  // namespace extree
