#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "extree/model.hpp"
#include "extree/random.hpp"
#include "extree/sampling.hpp"
#include "extree/tree_learn.hpp"

namespace extree {

/// Husler-Reiss edges with gamma ~ Unif[0.2, 1].
ExtremalTreeModel gen_model_m1(const LabeledTree& tree, RandomStream& rng);

/// Husler-Reiss edges with the same gamma = lambda everywhere.
ExtremalTreeModel gen_model_m1_fixed(const LabeledTree& tree, double lambda);

/// Dirichlet edges with both endpoint shapes ~ Unif[1, 10].
ExtremalTreeModel gen_model_m2(const LabeledTree& tree, RandomStream& rng);

/// 1 - |E_est intersect E_true| / (d - 1).
double edge_error(const LabeledTree& true_tree, const LabeledTree& est_tree);

struct FixedK {
  std::size_t k;
};
/// k = floor(n^0.8).
struct PowerK {};
/// k = round(q n) for each tail fraction q.
struct FractionGrid {
  std::vector<double> q;
};
using KRule = std::variant<FixedK, PowerK, FractionGrid>;

struct ModelM1 {};
struct ModelM2 {};
struct ModelM1Fixed {
  double lambda;
};
using ModelFamily = std::variant<ModelM1, ModelM2, ModelM1Fixed>;

enum class NoiseKind { N1, N2 };

struct ExperimentConfig {
  std::size_t d = 10;
  std::vector<std::size_t> n_list{1000};
  KRule k_rule = PowerK{};
  ModelFamily family = ModelM1{};
  NoiseKind noise = NoiseKind::N1;
  std::vector<LearnMethod> methods{LearnMethod::GammaCombined};
  std::size_t repetitions = 100;
  std::uint64_t seed = 1;
  /// Root used by the gamma-root learner.
  NodeId gamma_root = 0;
  /// Weights for gamma-weighted; empty means uniform.
  std::vector<double> weights;
  RandomTreeMode tree_mode = RandomTreeMode::SequentialEdges;

  /// Throws InvalidParameter on an unusable configuration.
  void validate() const;
};

/// Exceedance counts the rule produces at sample size n (clamped to [2, n]).
std::vector<std::size_t> k_values(const KRule& rule, std::size_t n);

struct ExperimentCell {
  LearnMethod method;
  std::size_t n;
  std::size_t k;
  double q;
  double err_mean;
  double err_se;
  double srr_mean;
  double srr_se;
  std::size_t reps;
  std::size_t failures;
};

struct ExperimentResult {
  std::vector<ExperimentCell> cells;
  std::vector<std::string> log;
};

/// Scores of one repetition, one entry per (n, k, method) in cell order.
struct RepetitionOutcome {
  std::vector<double> edge_error;
  std::vector<bool> recovered;
  std::vector<bool> failed;
  std::vector<std::string> log;
};

/// Runs repetition r in isolation; its random stream is (seed, r).
RepetitionOutcome run_repetition(const ExperimentConfig& config, std::size_t r);

/// All repetitions, aggregated in repetition order. Identical output for any
/// thread count. Errors inside a repetition count as non-recovery with edge
/// error 1 and are listed in `log`.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 1);

struct BootstrapResult {
  std::size_t resamples = 0;
  /// Number of resamples whose tree contains each edge (symmetric).
  Eigen::MatrixXi counts;
  /// counts / resamples.
  Eigen::MatrixXd frequency;
};

/// Refits the tree on B row resamples drawn with replacement (resample b uses
/// rng.substream(b)) and records how often each edge appears.
BootstrapResult bootstrap_stability(const DataMatrix& data, std::size_t k, std::size_t resamples,
                                    const Learner& learner, RandomStream& rng,
                                    unsigned threads = 1);

}  // namespace extree
