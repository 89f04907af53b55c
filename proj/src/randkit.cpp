#include "logscale/randkit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "logscale/errors.hpp"

namespace lss {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

void RngStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  buffer_ = philox4x32_10(ctr, key);
  ++block_;
  used_ = 0;
}

std::uint32_t RngStream::next_u32() {
  if (used_ == 4) refill();
  return buffer_[used_++];
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double RngStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

double sample_uniform(RngStream& rng, double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "sample_uniform: need finite a < b");
  return a + (b - a) * rng.uniform();
}

double sample_normal(RngStream& rng, double mean, double sd) {
  require(sd > 0.0 && std::isfinite(sd), "sample_normal: sd must be positive");
  return mean + sd * rng.normal();
}

double sample_exponential(RngStream& rng, double rate) {
  require(rate > 0.0 && std::isfinite(rate), "sample_exponential: rate must be positive");
  return -std::log(rng.uniform()) / rate;
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  require(shape > 0.0 && std::isfinite(shape), "sample_gamma: shape must be positive");
  require(rate > 0.0 && std::isfinite(rate), "sample_gamma: rate must be positive");
  // Marsaglia-Tsang; shapes below one are boosted by U^(1/shape).
  const bool boost = shape < 1.0;
  const double a = boost ? shape + 1.0 : shape;
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  double draw;
  for (;;) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      draw = d * v;
      break;
    }
  }
  if (boost) draw *= std::exp(std::log(rng.uniform()) / shape);
  return draw / rate;
}

double sample_inverse_gamma(RngStream& rng, double shape, double rate) {
  require(rate > 0.0 && std::isfinite(rate), "sample_inverse_gamma: rate must be positive");
  return rate / sample_gamma(rng, shape, 1.0);
}

double sample_inverse_gaussian(RngStream& rng, double mean, double shape) {
  require(mean > 0.0 && std::isfinite(mean), "sample_inverse_gaussian: mean must be positive");
  require(shape > 0.0 && std::isfinite(shape), "sample_inverse_gaussian: shape must be positive");
  const double nu = rng.normal();
  const double a = mean * nu * nu;
  double x = mean;
  if (a > 0.0) {
    // mean * (s - a) / (s + a) written without cancellation.
    const double s = std::sqrt(a * a + 4.0 * shape * a);
    x = mean * (4.0 * shape * a) / ((a + s) * (a + s));
  }
  const double u = rng.uniform();
  return u * (mean + x) <= mean ? x : mean * (mean / x);
}

Eigen::VectorXd sample_normal_vector(RngStream& rng, Eigen::Index n) {
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = rng.normal();
  return out;
}

std::vector<Eigen::Index> sample_without_replacement(RngStream& rng, Eigen::Index n, Eigen::Index k) {
  require(n >= 0 && k >= 0 && k <= n, "sample_without_replacement: need 0 <= k <= n");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto span = static_cast<std::uint64_t>(n - i);
    const auto j = i + static_cast<Eigen::Index>(rng.next_u64() % span);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace lss
