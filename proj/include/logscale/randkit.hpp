#pragma once

// Counter-based random streams (Philox4x32-10) and the exact variate
// generators used by the Gibbs sweep.
//
// A stream is identified by (seed, stream_id): the seed forms the Philox key
// and the stream id occupies the upper half of the 128-bit counter, so distinct
// ids never share a block.

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

namespace lss {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, second value cached).
  double normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

double sample_uniform(RngStream& rng, double a, double b);
double sample_normal(RngStream& rng, double mean, double sd);
double sample_exponential(RngStream& rng, double rate);
/// Gamma with density proportional to x^(shape-1) exp(-rate x).
double sample_gamma(RngStream& rng, double shape, double rate);
/// Reciprocal of Gamma(shape, rate): density proportional to x^(-shape-1) exp(-rate/x).
double sample_inverse_gamma(RngStream& rng, double shape, double rate);
/// Inverse Gaussian with the given mean and shape (Michael-Schucany-Haas).
double sample_inverse_gaussian(RngStream& rng, double mean, double shape);

Eigen::VectorXd sample_normal_vector(RngStream& rng, Eigen::Index n);

/// k distinct indices from {0, ..., n-1} in increasing order.
std::vector<Eigen::Index> sample_without_replacement(RngStream& rng, Eigen::Index n, Eigen::Index k);

}  // namespace lss
