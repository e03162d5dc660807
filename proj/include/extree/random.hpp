#pragma once

#include <cstdint>
#include <random>

namespace extree {

/// Seeded random stream identified by (seed, stream_id).
///
/// Identical (seed, stream_id) pairs reproduce identical draw sequences on any
/// platform: the engine is std::mt19937_64 and every variate below is derived
/// from its raw 64-bit output with fully specified arithmetic (the standard
/// library distributions are implementation-defined, so none are used).
/// Independent child streams are obtained with substream(); parallel code
/// derives one child per task so results never depend on the schedule.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream keyed by `index`. Does not advance this stream.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  double exponential();
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Gamma(shape, scale); Marsaglia-Tsang squeeze with the U^(1/shape) boost
  /// for shape < 1, so any positive shape is accepted.
  double gamma(double shape, double scale = 1.0);
  /// log of a Gamma(shape, 1) variate, computed without underflow for tiny shapes.
  double log_gamma_variate(double shape);
  /// Frechet with P(X <= x) = exp(-(x/scale)^(-shape)), by inversion.
  double frechet(double shape, double scale = 1.0);
  /// Standard Pareto, P(X <= x) = 1 - 1/x for x >= 1.
  double pareto() { return 1.0 / uniform(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to combine seeds and stream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace extree
