#include "extree/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "extree/closed_form.hpp"
#include "extree/error.hpp"
#include "extree/estimators.hpp"
#include "extree/random.hpp"
#include "extree/version.hpp"

namespace extree {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool parse_number(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return r.ec == std::errc() && r.ptr == cell.data() + cell.size() && std::isfinite(out);
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

const Json& field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw Error(Errc::ParseError, std::string("report: missing field '") + key + "'");
  return *it;
}

}  // namespace

NamedData parse_csv(std::string_view text, const CsvOptions& options) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

  std::vector<std::string> names;
  std::size_t first = 0;
  std::size_t d = 0;
  if (options.header && !lines.empty()) {
    for (std::string_view name : split(lines[0], options.delimiter)) names.push_back(unquote(name));
    d = names.size();
    first = 1;
  }
  if (lines.size() < first + 2) {
    throw Error(Errc::TooFewRows, "need at least 2 data rows, found " +
                                      std::to_string(lines.size() - std::min(lines.size(), first)));
  }
  if (d == 0) d = split(lines[first], options.delimiter).size();

  Eigen::MatrixXd values(static_cast<Eigen::Index>(lines.size() - first), static_cast<Eigen::Index>(d));
  for (std::size_t l = first; l < lines.size(); ++l) {
    const auto fields = split(lines[l], options.delimiter);
    if (fields.size() != d) {
      throw ParseFailure(Errc::ParseError, l + 1, std::min(fields.size(), d) + 1,
                         "expected " + std::to_string(d) + " fields, found " +
                             std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < d; ++c) {
      double x = 0.0;
      if (!parse_number(fields[c], x)) {
        throw ParseFailure(Errc::NonNumericCell, l + 1, c + 1,
                           "'" + std::string(fields[c]) + "' is not a finite number");
      }
      values(static_cast<Eigen::Index>(l - first), static_cast<Eigen::Index>(c)) =
          options.absolute ? std::abs(x) : x;
    }
  }
  if (names.empty()) {
    for (std::size_t c = 0; c < d; ++c) names.push_back("V" + std::to_string(c));
  }
  return {DataMatrix(std::move(values)), std::move(names)};
}

NamedData ingest_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), options);
}

std::vector<double> default_chi_levels() {
  return {0.80, 0.85, 0.90, 0.925, 0.95, 0.96, 0.97, 0.98, 0.99, 0.995, 0.999};
}

PipelineReport run_pipeline(const NamedData& input, const PipelineOptions& options) {
  if (!(options.q > 0.0 && options.q < 1.0)) throw Error(Errc::InvalidParameter, "q must lie in (0, 1)");
  const DataMatrix& data = input.data;
  const std::size_t n = data.n();
  const std::size_t d = data.d();
  if (input.names.size() != d) throw Error(Errc::DimensionMismatch, "one name per column required");
  const RankMatrix ranks = rank_transform(data);
  const ClampedK k = k_from_fraction(options.q, n);

  std::vector<std::pair<NodeId, NodeId>> pairs = options.chi_pairs;
  if (pairs.empty()) {
    for (NodeId i = 0; i < d; ++i) {
      for (NodeId j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
    }
  }
  std::vector<double> fractions;
  for (double level : options.chi_levels) {
    if (!(level > 0.0 && level < 1.0)) throw Error(Errc::InvalidParameter, "quantile levels must lie in (0, 1)");
    fractions.push_back(1.0 - level);
  }
  std::vector<PairChiCurve> curves;
  for (const auto& [i, j] : pairs) {
    if (i >= d || j >= d) throw Error(Errc::NodeOutOfRange, "chi curve pair outside the data");
    PairChiCurve curve{i, j, {}};
    const auto points = chi_curve(ranks, i, j, fractions);
    for (std::size_t p = 0; p < points.size(); ++p) {
      curve.points.push_back({points[p].q, options.chi_levels[p], points[p].k, points[p].chi});
    }
    curves.push_back(std::move(curve));
  }

  PipelineReport report{.version = version_string(),
                        .n = n,
                        .d = d,
                        .names = input.names,
                        .q = options.q,
                        .k = k.k,
                        .k_clamped = k.clamped,
                        .method = to_string(options.learner.method),
                        .chi_curves = std::move(curves),
                        .tree = learn_tree(ranks, options.learner, k.k, options.threads),
                        .bootstrap = std::nullopt,
                        .fit = std::nullopt,
                        .chi_table = {}};

  if (options.bootstrap > 0) {
    RandomStream rng(options.seed, 0);
    report.bootstrap =
        bootstrap_stability(data, k.k, options.bootstrap, options.learner, rng, options.threads);
  }
  if (options.fit_hr) {
    report.fit = fit_hr_tree(ranks, k.k, options.threads);
    const Eigen::MatrixXd empirical = chi_hat_matrix(ranks, k.k);
    for (NodeId i = 0; i < d; ++i) {
      for (NodeId j = i + 1; j < d; ++j) {
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        report.chi_table.push_back({i, j, empirical(ii, jj), report.fit->implied_chi(ii, jj)});
      }
    }
  }
  return report;
}

Json report_to_json(const PipelineReport& r) {
  Json j;
  j["version"] = r.version;
  j["input"] = {{"n", r.n}, {"d", r.d}, {"names", r.names}};
  j["q"] = r.q;
  j["k"] = r.k;
  j["k_clamped"] = r.k_clamped;
  j["method"] = r.method;
  j["chi_curve_axes"] = {
      {"tail_fraction", "exceedance fraction k/n; k = round(tail_fraction * n)"},
      {"quantile_level", "1 - tail_fraction, the marginal quantile level"}};
  Json curves = Json::array();
  for (const PairChiCurve& c : r.chi_curves) {
    Json points = Json::array();
    for (const ChiCurveRow& p : c.points) {
      points.push_back({{"tail_fraction", p.tail_fraction},
                        {"quantile_level", p.quantile_level},
                        {"k", p.k},
                        {"chi", p.chi}});
    }
    curves.push_back({{"i", c.i}, {"j", c.j}, {"points", std::move(points)}});
  }
  j["chi_curves"] = std::move(curves);
  j["tree"] = tree_to_json(r.tree, r.names);
  if (r.bootstrap) j["bootstrap"] = bootstrap_to_json(*r.bootstrap);
  if (r.fit) {
    j["fit_hr"] = fitted_to_json(*r.fit);
    Json table = Json::array();
    for (const ChiComparison& c : r.chi_table) {
      table.push_back({{"i", c.i}, {"j", c.j}, {"empirical", c.empirical}, {"implied", c.implied}});
    }
    j["chi_table"] = std::move(table);
  }
  return j;
}

PipelineReport report_from_json(const Json& j) {
  try {
    const Json& input = field(j, "input");
    std::vector<PairChiCurve> curves;
    for (const Json& c : field(j, "chi_curves")) {
      PairChiCurve curve{field(c, "i").get<NodeId>(), field(c, "j").get<NodeId>(), {}};
      for (const Json& p : field(c, "points")) {
        curve.points.push_back({field(p, "tail_fraction").get<double>(),
                                field(p, "quantile_level").get<double>(),
                                field(p, "k").get<std::size_t>(), field(p, "chi").get<double>()});
      }
      curves.push_back(std::move(curve));
    }
    PipelineReport r{.version = field(j, "version").get<std::string>(),
                     .n = field(input, "n").get<std::size_t>(),
                     .d = field(input, "d").get<std::size_t>(),
                     .names = field(input, "names").get<std::vector<std::string>>(),
                     .q = field(j, "q").get<double>(),
                     .k = field(j, "k").get<std::size_t>(),
                     .k_clamped = field(j, "k_clamped").get<bool>(),
                     .method = field(j, "method").get<std::string>(),
                     .chi_curves = std::move(curves),
                     .tree = tree_from_json(field(j, "tree")).tree,
                     .bootstrap = std::nullopt,
                     .fit = std::nullopt,
                     .chi_table = {}};
    if (j.contains("bootstrap")) r.bootstrap = bootstrap_from_json(j["bootstrap"]);
    if (j.contains("fit_hr")) {
      r.fit = fitted_from_json(j["fit_hr"]);
      for (const Json& c : field(j, "chi_table")) {
        r.chi_table.push_back({field(c, "i").get<NodeId>(), field(c, "j").get<NodeId>(),
                               field(c, "empirical").get<double>(), field(c, "implied").get<double>()});
      }
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(Errc::ParseError, std::string("report: ") + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace extree
