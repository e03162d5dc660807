#include "extree/random.hpp"

#include <cmath>

namespace extree {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(mix64(mix64(seed) ^ stream_id)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(mix64(seed_ ^ mix64(stream_id_ + 0x5851F42D4C957F2DULL)), index);
}

double RandomStream::uniform() {
  // 53 random bits placed at the centre of their cell: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  // Lemire's nearly-divisionless rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::exponential() { return -std::log(uniform()); }

double RandomStream::normal() {
  // Marsaglia polar method, one variate per call.
  for (;;) {
    const double a = 2.0 * uniform() - 1.0;
    const double b = 2.0 * uniform() - 1.0;
    const double s = a * a + b * b;
    if (s < 1.0 && s > 0.0) return a * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double RandomStream::gamma(double shape, double scale) {
  if (shape < 1.0) {
    const double boost = std::pow(uniform(), 1.0 / shape);
    return gamma(shape + 1.0, scale) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

double RandomStream::log_gamma_variate(double shape) {
  if (shape < 1.0) {
    const double log_boost = std::log(uniform()) / shape;
    return std::log(gamma(shape + 1.0)) + log_boost;
  }
  return std::log(gamma(shape));
}

double RandomStream::frechet(double shape, double scale) {
  return scale * std::pow(-std::log(uniform()), -1.0 / shape);
}

}  // namespace extree
