#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "extree/experiments.hpp"
#include "extree/model.hpp"
#include "extree/serialization.hpp"
#include "extree/tree_learn.hpp"

namespace extree {

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  /// Replace every value by its absolute value.
  bool absolute = false;
};

struct NamedData {
  DataMatrix data;
  std::vector<std::string> names;
};

/// Parses delimited numeric text. Rows and columns in errors are 1-based and
/// count the header line. Blank trailing lines are ignored.
NamedData parse_csv(std::string_view text, const CsvOptions& options = {});
NamedData ingest_csv(const std::string& path, const CsvOptions& options = {});

/// Quantile levels 0.80 ... 0.999 used for the chi curves.
std::vector<double> default_chi_levels();

struct PipelineOptions {
  /// Tail fraction; k = round(q n).
  double q = 0.05;
  /// Bootstrap resamples; 0 skips the bootstrap.
  std::size_t bootstrap = 0;
  bool fit_hr = true;
  /// Quantile levels (1 - tail fraction) for the chi curves.
  std::vector<double> chi_levels = default_chi_levels();
  /// Pairs for the chi curves; empty means every pair.
  std::vector<std::pair<NodeId, NodeId>> chi_pairs;
  Learner learner;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct ChiCurveRow {
  double tail_fraction;
  double quantile_level;
  std::size_t k;
  double chi;
};

struct PairChiCurve {
  NodeId i;
  NodeId j;
  std::vector<ChiCurveRow> points;
};

struct ChiComparison {
  NodeId i;
  NodeId j;
  double empirical;
  double implied;
};

struct PipelineReport {
  std::string version;
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::string> names;
  double q = 0.0;
  std::size_t k = 0;
  bool k_clamped = false;
  std::string method;
  std::vector<PairChiCurve> chi_curves;
  LabeledTree tree;
  std::optional<BootstrapResult> bootstrap;
  std::optional<FittedHrTree> fit;
  /// One row per unordered pair; present with the fit.
  std::vector<ChiComparison> chi_table;
};

PipelineReport run_pipeline(const NamedData& input, const PipelineOptions& options);

Json report_to_json(const PipelineReport& report);
PipelineReport report_from_json(const Json& j);

/// Two-space indented JSON text with a trailing newline.
std::string dump_json(const Json& j);

}  // namespace extree
