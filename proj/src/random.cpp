#include "chiral/random.hpp"

#include <cmath>
#include <numbers>

#include "chiral/error.hpp"

namespace chiral::random {

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

}  // namespace

ScalarField field_from_beta(double beta) {
  if (beta == 1.0) return ScalarField::Real;
  if (beta == 2.0) return ScalarField::Complex;
  if (beta == 4.0) return ScalarField::Quaternion;
  throw ParameterError("dense models exist only for beta in {1, 2, 4}, got " + std::to_string(beta));
}

std::array<std::uint32_t, 4> RngStream::philox(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
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

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

void RngStream::refill() {
  const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                         static_cast<std::uint32_t>(stream_id_),
                                         static_cast<std::uint32_t>(stream_id_ >> 32)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox(ctr, key);
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buffered_ = 2;
  ++block_;
}

RngStream::result_type RngStream::operator()() {
  if (buffered_ == 0) refill();
  return buffer_[2 - buffered_--];
}

double RngStream::uniform() {
  // 53 random bits centered in their cell: never 0, never 1.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

Quaternion sample_gaussian(ScalarField field, double variance, RngStream& rng) {
  if (!(variance > 0.0)) throw ParameterError("sample_gaussian: variance must be positive");
  const int k = components(field);
  const double sd = std::sqrt(variance / k);
  Quaternion q;
  q.w = sd * rng.normal();
  if (k >= 2) q.x = sd * rng.normal();
  if (k == 4) {
    q.y = sd * rng.normal();
    q.z = sd * rng.normal();
  }
  return q;
}

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw ParameterError("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    // G(a) = G(a + 1) * U^(1/a)
    const double g = sample_gamma(shape + 1.0, rng);
    return std::exp(std::log(g) + std::log(rng.uniform()) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_chi(double alpha, RngStream& rng) {
  if (!(alpha > 0.0)) throw ParameterError("sample_chi: alpha must be positive");
  return std::sqrt(2.0 * sample_gamma(0.5 * alpha, rng));
}

QuaternionVector sample_haar_unit_vector(ScalarField field, Index dim, RngStream& rng) {
  if (dim < 1) throw ParameterError("sample_haar_unit_vector: dim must be >= 1");
  QuaternionVector v(dim);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (Index i = 0; i < dim; ++i) {
      v(i) = sample_gaussian(field, 1.0, rng);
      norm2 += v(i).norm2();
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (Index i = 0; i < dim; ++i) v(i) *= inv;
  return v;
}

}  // namespace chiral::random
