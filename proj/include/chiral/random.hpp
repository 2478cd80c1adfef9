#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "chiral/quaternion.hpp"
#include "chiral/types.hpp"

namespace chiral::random {

// Dyson index field: Real (beta = 1), Complex (beta = 2), Quaternion (beta = 4).
enum class ScalarField { Real = 1, Complex = 2, Quaternion = 4 };

// Field for beta in {1, 2, 4}; throws ParameterError otherwise.
ScalarField field_from_beta(double beta);
constexpr int beta_of(ScalarField f) { return static_cast<int>(f); }
// Number of real components carried by one field element.
constexpr int components(ScalarField f) { return static_cast<int>(f); }

/// Counter-based stream (Philox4x32-10). The key is the seed and the upper half
/// of the 128-bit counter is the stream id, so every (seed, stream_id) pair owns
/// a disjoint 2^64-block sequence. Parallel Monte Carlo allocates one stream per
/// replicate and is therefore independent of the worker count.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal (Box-Muller, one cached value).
  double normal();

  // One Philox4x32-10 block; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Centered field Gaussian with E|X|^2 = variance, split evenly across the
// real components of the field.
Quaternion sample_gaussian(ScalarField field, double variance, RngStream& rng);

// Gamma(shape, scale 1); Marsaglia-Tsang squeeze, boosted for shape < 1.
double sample_gamma(double shape, RngStream& rng);

// chi_alpha = sqrt(2 Gamma(alpha / 2)); any alpha > 0.
double sample_chi(double alpha, RngStream& rng);

// Uniformly distributed unit vector in field^dim (normalized Gaussian vector).
QuaternionVector sample_haar_unit_vector(ScalarField field, Index dim, RngStream& rng);

}  // namespace chiral::random
