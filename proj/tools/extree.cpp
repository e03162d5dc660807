// Command-line front end: simulate, estimate, learn, chi-curve, fit-hr,
// bootstrap, experiment, pipeline.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "extree/error.hpp"
#include "extree/estimators.hpp"
#include "extree/experiments.hpp"
#include "extree/pipeline.hpp"
#include "extree/sampling.hpp"
#include "extree/serialization.hpp"
#include "extree/tree_learn.hpp"
#include "extree/version.hpp"

namespace {

using namespace extree;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
};

struct DataFlags {
  std::string input;
  std::string delimiter = ",";
  bool no_header = false;
  bool abs = false;
};

struct KFlags {
  std::optional<long long> k;
  std::optional<double> q;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--input", f.input, "CSV file of observations")->required();
  cmd->add_option("--delimiter", f.delimiter, "Field separator (one character)");
  cmd->add_flag("--no-header", f.no_header, "First line is data, not column names");
  cmd->add_flag("--abs", f.abs, "Use absolute values");
}

void add_k_flags(CLI::App* cmd, KFlags& f) {
  auto* k = cmd->add_option("--k", f.k, "Number of exceedances");
  auto* q = cmd->add_option("--q", f.q, "Tail fraction, k = round(q n)");
  k->excludes(q);
}

NamedData load(const DataFlags& f) {
  if (f.delimiter.size() != 1) throw Error(Errc::InvalidParameter, "delimiter must be one character");
  return ingest_csv(f.input, CsvOptions{f.delimiter[0], !f.no_header, f.abs});
}

std::size_t resolve_k(const KFlags& f, std::size_t n) {
  ClampedK k{0, false};
  if (f.k) {
    k = clamp_k(*f.k, n);
  } else if (f.q) {
    k = k_from_fraction(*f.q, n);
  } else {
    return default_k(n);
  }
  if (k.clamped) std::cerr << "warning: k clamped to " << k.k << " (valid range [2, " << n << "])\n";
  return k.k;
}

unsigned thread_count(const Globals& g) {
  if (g.threads < 0) throw Error(Errc::InvalidParameter, "--threads must be >= 0");
  return static_cast<unsigned>(g.threads);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(Errc::IoError, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw Error(Errc::IoError, "write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_json(const Globals& g, const Json& j) {
  Output out(g.out);
  out.stream() << dump_json(with_version(j));
  out.finish();
}

std::vector<double> read_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return parse_json(text).get<std::vector<double>>();
    } catch (const Json::exception& e) {
      throw Error(Errc::ParseError, "weights: " + std::string(e.what()));
    }
  }
  std::string cleaned = text;
  for (char& c : cleaned) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream tokens(cleaned);
  std::vector<double> weights;
  std::string token;
  while (tokens >> token) {
    try {
      std::size_t used = 0;
      weights.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "weights: '" + token + "' is not a number");
    }
  }
  return weights;
}

/// chi | gamma-root=M | gamma | gamma-combined | gamma-weighted=FILE
Learner parse_learner(const std::string& spec) {
  const auto eq = spec.find('=');
  const std::string name = spec.substr(0, eq);
  const std::string arg = eq == std::string::npos ? "" : spec.substr(eq + 1);
  Learner learner;
  learner.method = parse_learn_method(name);
  if (learner.method == LearnMethod::GammaRoot) {
    if (arg.empty()) throw Error(Errc::InvalidParameter, "gamma-root needs a node, e.g. gamma-root=0");
    try {
      std::size_t used = 0;
      learner.root = std::stoul(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidParameter, "gamma-root node '" + arg + "' is not an integer");
    }
  } else if (learner.method == LearnMethod::GammaWeighted) {
    if (arg.empty()) throw Error(Errc::InvalidParameter, "gamma-weighted needs a weights file");
    learner.weights = read_weights(arg);
  } else if (!arg.empty()) {
    throw Error(Errc::InvalidParameter, "method '" + name + "' takes no argument");
  }
  return learner;
}

void check_root(const Learner& learner, std::size_t d) {
  if (learner.method == LearnMethod::GammaRoot && learner.root >= d) {
    throw Error(Errc::NodeOutOfRange, "root " + std::to_string(learner.root) + " outside the data");
  }
}

struct SimulateArgs {
  std::string model;
  std::size_t n = 0;
  std::string noise = "none";
  std::string noise_model;
  std::optional<NodeId> rooted;
};

void run_simulate(const Globals& g, const SimulateArgs& a) {
  std::vector<std::string> names;
  const ExtremalTreeModel model = model_from_json(read_json_file(a.model), &names);
  if (a.n < 1) throw Error(Errc::InvalidParameter, "--n must be >= 1");
  SamplingOptions opts;
  opts.threads = thread_count(g);
  RandomStream rng(g.seed, 0);
  Eigen::MatrixXd values;
  if (a.rooted) {
    if (*a.rooted >= model.d()) throw Error(Errc::NodeOutOfRange, "--rooted outside the model");
    values = sample_y_rooted(model, *a.rooted, a.n, rng, opts);
  } else if (!a.noise_model.empty()) {
    const NoiseSpec spec = TreeNoise{model_from_json(read_json_file(a.noise_model))};
    values = sample_domain_of_attraction(model, spec, a.n, rng, opts).values();
  } else if (a.noise == "n1" || a.noise == "N1") {
    values = sample_domain_of_attraction(model, IndependentNoise{}, a.n, rng, opts).values();
  } else if (a.noise == "none") {
    values = sample_max_stable(model, a.n, rng, opts);
  } else {
    throw Error(Errc::InvalidParameter, "--noise must be none or n1");
  }
  Output out(g.out);
  write_matrix_csv(out.stream(), values, names);
  out.finish();
}

void run_estimate(const Globals& g, const DataFlags& df, const KFlags& kf, const std::string& root,
                  const std::string& weights_file) {
  const NamedData in = load(df);
  const RankMatrix ranks = rank_transform(in.data);
  const std::size_t k = resolve_k(kf, in.data.n());
  VariogramEstimate e;
  if (root == "combined") {
    const std::vector<double> w = weights_file.empty() ? std::vector<double>{} : read_weights(weights_file);
    e = gamma_hat_combined(ranks, k, w, thread_count(g));
  } else {
    std::size_t m = 0;
    try {
      std::size_t used = 0;
      m = std::stoul(root, &used);
      if (used != root.size()) throw std::invalid_argument(root);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidParameter, "--root must be an integer or 'combined'");
    }
    e = gamma_hat_rooted(ranks, m, k);
  }
  Json j = estimate_to_json(e);
  j["names"] = in.names;
  write_json(g, j);
}

void run_learn(const Globals& g, const DataFlags& df, const KFlags& kf, const std::string& method) {
  const Learner learner = parse_learner(method);
  const NamedData in = load(df);
  check_root(learner, in.data.d());
  const std::size_t k = resolve_k(kf, in.data.n());
  const LabeledTree tree = learn_tree(rank_transform(in.data), learner, k, thread_count(g));
  Json j = tree_to_json(tree, in.names);
  j["method"] = to_string(learner.method);
  j["k"] = k;
  j["n"] = in.data.n();
  write_json(g, j);
}

void run_chi_curve(const Globals& g, const DataFlags& df, std::optional<NodeId> i,
                   std::optional<NodeId> j, std::vector<double> levels) {
  const NamedData in = load(df);
  const RankMatrix ranks = rank_transform(in.data);
  if (levels.empty()) levels = default_chi_levels();
  std::vector<double> fractions;
  for (double level : levels) {
    if (!(level > 0.0 && level < 1.0)) throw Error(Errc::InvalidParameter, "levels must lie in (0, 1)");
    fractions.push_back(1.0 - level);
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  if (i && j) {
    pairs.emplace_back(*i, *j);
  } else {
    for (NodeId a = 0; a < in.data.d(); ++a) {
      for (NodeId b = a + 1; b < in.data.d(); ++b) pairs.emplace_back(a, b);
    }
  }
  Output out(g.out);
  out.stream() << "i,j,name_i,name_j,tail_fraction,quantile_level,k,chi\n";
  for (const auto& [a, b] : pairs) {
    if (a >= in.data.d() || b >= in.data.d()) throw Error(Errc::NodeOutOfRange, "pair outside the data");
    const auto curve = chi_curve(ranks, a, b, fractions);
    for (std::size_t p = 0; p < curve.size(); ++p) {
      out.stream() << a << ',' << b << ',' << in.names[a] << ',' << in.names[b] << ','
                   << format_double(curve[p].q) << ',' << format_double(levels[p]) << ','
                   << curve[p].k << ',' << format_double(curve[p].chi) << '\n';
    }
  }
  out.finish();
}

void run_fit_hr(const Globals& g, const DataFlags& df, const KFlags& kf) {
  const NamedData in = load(df);
  const std::size_t k = resolve_k(kf, in.data.n());
  Json j = fitted_to_json(fit_hr_tree(rank_transform(in.data), k, thread_count(g)));
  j["tree"]["names"] = in.names;
  write_json(g, j);
}

void run_bootstrap(const Globals& g, const DataFlags& df, const KFlags& kf, std::size_t resamples,
                   const std::string& method) {
  const Learner learner = parse_learner(method);
  const NamedData in = load(df);
  check_root(learner, in.data.d());
  const std::size_t k = resolve_k(kf, in.data.n());
  RandomStream rng(g.seed, 0);
  Json j = bootstrap_to_json(bootstrap_stability(in.data, k, resamples, learner, rng, thread_count(g)));
  j["names"] = in.names;
  j["method"] = to_string(learner.method);
  j["k"] = k;
  j["n"] = in.data.n();
  write_json(g, j);
}

void run_experiment_cmd(const Globals& g, const std::string& config_path,
                        std::optional<std::uint64_t> seed_override) {
  ExperimentConfig config = config_from_json(read_json_file(config_path));
  if (seed_override) config.seed = *seed_override;
  const ExperimentResult result = run_experiment(config, thread_count(g));
  for (const std::string& line : result.log) std::cerr << "repetition error: " << line << '\n';
  Output out(g.out);
  write_experiment_csv(out.stream(), result);
  out.finish();
}

void run_pipeline_cmd(const Globals& g, const DataFlags& df, double q, std::size_t resamples,
                      bool no_fit, const std::string& method) {
  PipelineOptions opts;
  opts.q = q;
  opts.bootstrap = resamples;
  opts.fit_hr = !no_fit;
  opts.learner = parse_learner(method);
  opts.seed = g.seed;
  opts.threads = thread_count(g);
  const NamedData in = load(df);
  check_root(opts.learner, in.data.d());
  const PipelineReport report = run_pipeline(in, opts);
  if (report.k_clamped) std::cerr << "warning: k clamped to " << report.k << '\n';
  write_json(g, report_to_json(report));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-structured extremal dependence: simulation, estimation and structure learning"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--out", g.out, "Output file (default stdout)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample from an extremal tree model (CSV)");
  simulate->add_option("--model", sim.model, "Model JSON")->required();
  simulate->add_option("--n", sim.n, "Number of rows")->required();
  simulate->add_option("--noise", sim.noise, "none (max-stable Z) or n1 (Z plus independent noise)");
  simulate->add_option("--noise-model", sim.noise_model, "Model JSON of dependent noise (Z plus tree noise)");
  simulate->add_option("--rooted", sim.rooted, "Sample the Pareto vector rooted at this node instead");

  DataFlags est_data;
  KFlags est_k;
  std::string est_root = "combined";
  std::string est_weights;
  auto* estimate = app.add_subcommand("estimate", "Empirical extremal variogram (JSON)");
  add_data_flags(estimate, est_data);
  add_k_flags(estimate, est_k);
  estimate->add_option("--root", est_root, "Root node or 'combined'");
  estimate->add_option("--weights", est_weights, "Combination weights file (with --root combined)");

  DataFlags learn_data;
  KFlags learn_k;
  std::string learn_method = "gamma";
  auto* learn = app.add_subcommand("learn", "Learn the tree structure (JSON)");
  add_data_flags(learn, learn_data);
  add_k_flags(learn, learn_k);
  learn->add_option("--method", learn_method, "chi | gamma-root=M | gamma | gamma-weighted=FILE");

  DataFlags chi_data;
  std::optional<NodeId> chi_i;
  std::optional<NodeId> chi_j;
  std::vector<double> chi_levels;
  auto* chi = app.add_subcommand("chi-curve", "Empirical extremal correlation curves (CSV)");
  add_data_flags(chi, chi_data);
  auto* opt_i = chi->add_option("--i", chi_i, "First variable");
  auto* opt_j = chi->add_option("--j", chi_j, "Second variable");
  opt_i->needs(opt_j);
  opt_j->needs(opt_i);
  chi->add_option("--levels", chi_levels, "Quantile levels in (0, 1)")->delimiter(',');

  DataFlags fit_data;
  KFlags fit_k;
  auto* fit = app.add_subcommand("fit-hr", "Fit a Husler-Reiss tree (JSON)");
  add_data_flags(fit, fit_data);
  add_k_flags(fit, fit_k);

  DataFlags boot_data;
  KFlags boot_k;
  std::size_t boot_b = 100;
  std::string boot_method = "gamma";
  auto* boot = app.add_subcommand("bootstrap", "Edge frequencies over bootstrap resamples (JSON)");
  add_data_flags(boot, boot_data);
  add_k_flags(boot, boot_k);
  boot->add_option("--B", boot_b, "Number of resamples");
  boot->add_option("--method", boot_method, "Learner, as for learn");

  std::string exp_config;
  auto* experiment = app.add_subcommand("experiment", "Simulation study (CSV)");
  experiment->add_option("--config", exp_config, "ExperimentConfig JSON")->required();

  DataFlags pipe_data;
  double pipe_q = 0.05;
  std::size_t pipe_b = 0;
  bool pipe_no_fit = false;
  std::string pipe_method = "gamma";
  auto* pipeline = app.add_subcommand("pipeline", "Full analysis report (JSON)");
  add_data_flags(pipeline, pipe_data);
  pipeline->add_option("--q", pipe_q, "Tail fraction");
  pipeline->add_option("--B", pipe_b, "Bootstrap resamples (0 = none)");
  pipeline->add_flag("--no-fit", pipe_no_fit, "Skip the Husler-Reiss fit");
  pipeline->add_option("--method", pipe_method, "Learner, as for learn");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (simulate->parsed()) {
      run_simulate(g, sim);
    } else if (estimate->parsed()) {
      run_estimate(g, est_data, est_k, est_root, est_weights);
    } else if (learn->parsed()) {
      run_learn(g, learn_data, learn_k, learn_method);
    } else if (chi->parsed()) {
      run_chi_curve(g, chi_data, chi_i, chi_j, chi_levels);
    } else if (fit->parsed()) {
      run_fit_hr(g, fit_data, fit_k);
    } else if (boot->parsed()) {
      run_bootstrap(g, boot_data, boot_k, boot_b, boot_method);
    } else if (experiment->parsed()) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = g.seed;
      run_experiment_cmd(g, exp_config, seed);
    } else if (pipeline->parsed()) {
      run_pipeline_cmd(g, pipe_data, pipe_q, pipe_b, pipe_no_fit, pipe_method);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
