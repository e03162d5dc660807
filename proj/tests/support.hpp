#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include "extree/tree.hpp"

namespace testing {

inline extree::LabeledTree tree_of(std::size_t d,
                                   std::initializer_list<std::pair<std::size_t, std::size_t>> edges) {
  std::vector<extree::Edge> es;
  for (const auto& [u, v] : edges) es.emplace_back(u, v);
  return extree::validate_tree(d, es);
}

/// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
inline double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    dmax = std::max({dmax, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return dmax;
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

struct MeanSe {
  double mean;
  double se;
};

inline MeanSe mean_se(const std::vector<double>& x) {
  const auto n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

/// Sample variance (denominator N) with the standard error sqrt((m4 - m2^2) / N).
inline MeanSe variance_se(const std::vector<double>& x) {
  const auto n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  return {m2, std::sqrt(std::max(0.0, m4 - m2 * m2) / n)};
}

/// All labeled trees on d nodes, via Pruefer sequences.
inline std::vector<extree::LabeledTree> all_trees(std::size_t d) {
  std::vector<extree::LabeledTree> out;
  std::vector<std::size_t> seq(d >= 2 ? d - 2 : 0, 0);
  for (;;) {
    out.push_back(extree::tree_from_pruefer(d, seq));
    std::size_t pos = 0;
    while (pos < seq.size() && ++seq[pos] == d) seq[pos++] = 0;
    if (pos == seq.size()) break;
  }
  return out;
}

}  // namespace testing
