#include "extree/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "extree/error.hpp"
#include "extree/parallel.hpp"

namespace extree {

namespace {

void check_node(const RankMatrix& ranks, NodeId i) {
  if (i >= ranks.d()) throw Error(Errc::NodeOutOfRange, "variable " + std::to_string(i));
}

void check_k(std::size_t k, std::size_t lo, std::size_t n) {
  if (k < lo || k > n) {
    throw Error(Errc::KOutOfRange, "k = " + std::to_string(k) + " outside [" +
                                       std::to_string(lo) + ", " + std::to_string(n) + "]");
  }
}

}  // namespace

RankMatrix rank_transform(const Eigen::MatrixXd& data) {
  RankMatrix out;
  out.n_ = static_cast<std::size_t>(data.rows());
  out.d_ = static_cast<std::size_t>(data.cols());
  out.ranks_.resize(out.n_ * out.d_);
  std::vector<std::size_t> order(out.n_);
  for (std::size_t i = 0; i < out.d_; ++i) {
    const auto col = data.col(static_cast<Eigen::Index>(i));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&col](std::size_t a, std::size_t b) {
      return col(static_cast<Eigen::Index>(a)) < col(static_cast<Eigen::Index>(b));
    });
    for (std::size_t r = 0; r < out.n_; ++r) out.ranks_[i * out.n_ + order[r]] = r + 1;
  }
  return out;
}

RankMatrix rank_transform(const DataMatrix& data) { return rank_transform(data.values()); }

std::vector<std::size_t> RankMatrix::top_rows(NodeId i, std::size_t k) const {
  std::vector<std::size_t> rows;
  rows.reserve(k);
  const std::size_t cut = n_ - std::min(k, n_);
  for (std::size_t t = 0; t < n_; ++t) {
    if (rank(t, i) > cut) rows.push_back(t);
  }
  return rows;
}

std::size_t default_k(std::size_t n) {
  if (n < 2) throw Error(Errc::InvalidParameter, "default_k needs n >= 2");
  // k <= n^0.8  <=>  k^5 <= n^4; correct the floating-point guess exactly.
  auto fits = [n](std::size_t k) {
    const auto kk = static_cast<unsigned __int128>(k);
    const auto nn = static_cast<unsigned __int128>(n);
    return kk * kk * kk * kk * kk <= nn * nn * nn * nn;
  };
  auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.8)));
  while (k > 0 && !fits(k)) --k;
  while (fits(k + 1)) ++k;
  return std::min(n, std::max<std::size_t>(2, k));
}

ClampedK clamp_k(long long k, std::size_t n) {
  const auto lo = 2LL;
  const auto hi = static_cast<long long>(n);
  const long long c = std::clamp(k, lo, std::max(lo, hi));
  return {static_cast<std::size_t>(c), c != k};
}

ClampedK k_from_fraction(double q, std::size_t n) {
  if (!(q > 0.0 && q <= 1.0)) throw Error(Errc::InvalidParameter, "tail fraction outside (0, 1]");
  return clamp_k(std::llround(q * static_cast<double>(n)), n);
}

double chi_hat(const RankMatrix& ranks, NodeId i, NodeId j, std::size_t k) {
  check_node(ranks, i);
  check_node(ranks, j);
  const std::size_t n = ranks.n();
  check_k(k, 1, n);
  const std::size_t cut = n - k;
  std::size_t both = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (ranks.rank(t, i) > cut && ranks.rank(t, j) > cut) ++both;
  }
  return static_cast<double>(both) / static_cast<double>(k);
}

Eigen::MatrixXd chi_hat_matrix(const RankMatrix& ranks, std::size_t k) {
  const auto d = static_cast<Eigen::Index>(ranks.d());
  Eigen::MatrixXd chi = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double c = chi_hat(ranks, static_cast<NodeId>(i), static_cast<NodeId>(j), k);
      chi(i, j) = c;
      chi(j, i) = c;
    }
  }
  return chi;
}

std::vector<ChiCurvePoint> chi_curve(const RankMatrix& ranks, NodeId i, NodeId j,
                                     std::span<const double> q_grid) {
  std::vector<ChiCurvePoint> curve;
  curve.reserve(q_grid.size());
  for (double q : q_grid) {
    if (!(q > 0.0 && q < 1.0)) throw Error(Errc::InvalidParameter, "q grid values must lie in (0, 1)");
    const std::size_t k = k_from_fraction(q, ranks.n()).k;
    curve.push_back({q, k, chi_hat(ranks, i, j, k)});
  }
  return curve;
}

VariogramEstimate gamma_hat_rooted(const RankMatrix& ranks, NodeId m, std::size_t k) {
  check_node(ranks, m);
  const std::size_t n = ranks.n();
  check_k(k, 2, n);
  const std::size_t d = ranks.d();
  const std::vector<std::size_t> rows = ranks.top_rows(m, k);

  // log(1 - u) for the selected rows, one contiguous block per variable.
  std::vector<double> logs(d * k);
  const auto denom = static_cast<double>(n + 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t s = 0; s < k; ++s) {
      logs[i * k + s] = std::log(static_cast<double>(n + 1 - ranks.rank(rows[s], i)) / denom);
    }
  }

  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dd, dd);
  const auto kd = static_cast<double>(k);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double* a = &logs[i * k];
      const double* b = &logs[j * k];
      double mean = 0.0;
      for (std::size_t s = 0; s < k; ++s) mean += a[s] - b[s];
      mean /= kd;
      double ss = 0.0;
      for (std::size_t s = 0; s < k; ++s) {
        const double dev = (a[s] - b[s]) - mean;
        ss += dev * dev;
      }
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      g(ii, jj) = ss / kd;
      g(jj, ii) = g(ii, jj);
    }
  }
  return {std::move(g), m, k, n, std::nullopt};
}

VariogramEstimate gamma_hat_combined(const RankMatrix& ranks, std::size_t k,
                                     std::span<const double> weights, unsigned threads) {
  const std::size_t d = ranks.d();
  std::vector<double> w;
  if (weights.empty()) {
    w.assign(d, 1.0 / static_cast<double>(d));
  } else {
    if (weights.size() != d) throw Error(Errc::DimensionMismatch, "one weight per variable required");
    w.assign(weights.begin(), weights.end());
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw Error(Errc::InvalidParameter, "weights must be finite and nonnegative");
      }
    }
    if (*std::max_element(w.begin(), w.end()) <= 0.0) {
      throw Error(Errc::AllZeroWeights, "at least one weight must be positive");
    }
  }
  check_k(k, 2, ranks.n());

  std::vector<Eigen::MatrixXd> rooted(d);
  parallel_for(d, threads, [&](std::size_t m) {
    if (w[m] > 0.0) rooted[m] = gamma_hat_rooted(ranks, m, k).g;
  });
  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dd, dd);
  for (std::size_t m = 0; m < d; ++m) {
    if (w[m] > 0.0) g += w[m] * rooted[m];
  }
  return {std::move(g), std::nullopt, k, ranks.n(), std::move(w)};
}

}  // namespace extree
