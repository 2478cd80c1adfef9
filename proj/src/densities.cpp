#include "chiral/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chiral/error.hpp"

namespace chiral::densities {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLn2 = std::numbers::ln2;

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
}

// Sum over ordered pairs (j, k), j == k included, of log|z_j + z_k|.
double log_sum_pair_product(const VectorXd& z) {
  double acc = 0.0;
  for (Index j = 0; j < z.size(); ++j)
    for (Index k = 0; k < z.size(); ++k) acc += std::log(std::abs(z(j) + z(k)));
  return acc;
}

double log_vandermonde(const VectorXd& z) {
  double acc = 0.0;
  for (Index j = 0; j < z.size(); ++j)
    for (Index k = j + 1; k < z.size(); ++k) acc += std::log(std::abs(z(j) - z(k)));
  return acc;
}

// z-dependent part shared by every Hermitian-perturbation density.
double hermitian_core(const VectorXd& z, double beta, double power) {
  double acc = 0.0;
  for (Index j = 0; j < z.size(); ++j) acc += power * std::log(std::abs(z(j))) - 0.25 * z(j) * z(j);
  acc += log_vandermonde(z);
  if (beta != 2.0) acc += 0.25 * (beta - 2.0) * log_sum_pair_product(z);
  return acc;
}

// Exponent of |z_j| in the perturbed densities.
double point_power(const EnsembleParams& p) {
  const double beta = p.beta;
  if (p.even()) return (2.0 * beta * p.a() - beta + 2.0) / 4.0;
  return (2.0 * beta * static_cast<double>(p.m) - 2.0 * beta * static_cast<double>(p.n) - beta - 2.0) / 4.0;
}

double log_fixed_constant(const EnsembleParams& p) {
  return p.even() ? log_Z(p.beta, p.m, p.a()) : log_W(p.beta, p.m, p.n, p.a());
}

double log_random_constant(const EnsembleParams& p) {
  return p.even() ? log_Z_tilde(p.beta, p.m, p.a()) : log_W_tilde(p.beta, p.m, p.n, p.a());
}

// Coefficients (low-to-high) of prod_k (u - r_k), skipping index `skip`.
std::vector<double> product_poly(const VectorXd& r, Index skip = -1) {
  std::vector<double> c{1.0};
  for (Index k = 0; k < r.size(); ++k) {
    if (k == skip) continue;
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] += c[j];
      next[j] -= r(k) * c[j];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

DensityParams DensityParams::fixed(const EnsembleParams& p, double l) {
  p.validate();
  if (!(l > 0.0)) throw ParameterError("fixed coupling must be positive");
  DensityParams dp;
  dp.params = p;
  dp.mode = LMode::Fixed;
  dp.l = l;
  return dp;
}

DensityParams DensityParams::chi(const EnsembleParams& p) {
  p.validate();
  DensityParams dp;
  dp.params = p;
  dp.mode = LMode::ChiRandom;
  return dp;
}

DensityParams DensityParams::custom(const EnsembleParams& p, std::function<double(double)> log_F) {
  p.validate();
  if (!log_F) throw ParameterError("custom coupling law needs a log-density");
  DensityParams dp;
  dp.params = p;
  dp.mode = LMode::Custom;
  dp.log_F = std::move(log_F);
  return dp;
}

double DensityParams::log_l_density(double lv) const {
  if (!(lv > 0.0)) return kNegInf;
  switch (mode) {
    case LMode::ChiRandom:
      return log_chi_coupling_density(params.beta, params.m, lv);
    case LMode::Custom:
      return log_F(lv);
    case LMode::Fixed:
      break;
  }
  throw ParameterError("fixed coupling has no density");
}

double log_h(double beta, Index s, double a) {
  require_beta(beta);
  if (s < 1) throw DomainError("h: s must be >= 1");
  if (!(beta * a / 2.0 > -1.0)) throw DomainError("h: beta a / 2 must exceed -1");
  const double sd = static_cast<double>(s);
  double acc = sd * (a * beta / 2.0 + 1.0 + (sd - 1.0) * beta / 2.0) * kLn2;
  for (Index j = 1; j <= s; ++j) {
    const double jd = static_cast<double>(j);
    acc += std::lgamma(1.0 + beta * jd / 2.0) + std::lgamma(1.0 + beta * a / 2.0 + beta * (jd - 1.0) / 2.0) -
           std::lgamma(1.0 + beta / 2.0);
  }
  return acc;
}

double log_Z(double beta, Index m, double a) {
  const double md = static_cast<double>(m);
  return md * (beta - 2.0) / 2.0 * kLn2 + log_h(beta, m, a) + md * std::lgamma(beta / 2.0) - std::lgamma(md + 1.0) -
         std::lgamma(beta * md / 2.0);
}

double log_W(double beta, Index m, Index n, double a) {
  if (m < n + 1) throw DomainError("W: needs m >= n + 1");
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  return (2.0 * nd + 1.0) * (beta - 2.0) / 4.0 * kLn2 + log_h(beta, n, a) + nd * std::lgamma(beta / 2.0) +
         std::lgamma(beta * (md - nd) / 2.0) - std::lgamma(nd + 1.0) - std::lgamma(beta * md / 2.0);
}

double log_Z_tilde(double beta, Index m, double a) {
  const double md = static_cast<double>(m);
  return (md * beta - md - 1.0) * kLn2 + log_h(beta, m, a) + std::lgamma(beta * md / 4.0) +
         md * std::lgamma(beta / 2.0) - std::lgamma(md + 1.0) - std::lgamma(beta * md / 2.0);
}

double log_W_tilde(double beta, Index m, Index n, double a) {
  const double md = static_cast<double>(m);
  return log_W(beta, m, n, a) + (beta * md / 2.0 - 1.0) * kLn2 + std::lgamma(beta * md / 4.0);
}

double log_chi_coupling_density(double beta, Index m, double l) {
  require_beta(beta);
  if (!(l > 0.0)) return kNegInf;
  const double k = beta * static_cast<double>(m) / 2.0;
  return (k - 1.0) * std::log(l) - l * l / 4.0 - (k - 1.0) * kLn2 - std::lgamma(k / 2.0);
}

double spectral_logdensity(const EnsembleParams& params, const VectorXd& lambdas, const VectorXd& weights,
                           std::optional<double> w0) {
  params.validate();
  const Index s = params.s();
  const bool odd = !params.even();
  if (lambdas.size() != s || weights.size() != s) throw ParameterError("spectral data has the wrong dimension");
  if (odd != w0.has_value()) throw ParameterError("w0 must be given exactly when N is odd");
  if ((lambdas.array() <= 0.0).any() || (weights.array() <= 0.0).any()) return kNegInf;
  if (odd && !(*w0 > 0.0)) return kNegInf;
  const double total = weights.sum() + w0.value_or(0.0);
  if (std::abs(total - 1.0) > 1e-9) return kNegInf;

  const double beta = params.beta;
  const double a = params.a();
  const double sd = static_cast<double>(s);
  double acc = sd * kLn2 - log_h(beta, s, a);
  for (Index j = 0; j < s; ++j) acc += (beta * a + 1.0) * std::log(lambdas(j)) - 0.5 * lambdas(j) * lambdas(j);
  for (Index j = 0; j < s; ++j)
    for (Index k = j + 1; k < s; ++k)
      acc += beta * std::log(std::abs(lambdas(k) * lambdas(k) - lambdas(j) * lambdas(j)));

  const double md = static_cast<double>(params.m);
  acc += std::lgamma(beta * md / 2.0) - sd * std::lgamma(beta / 2.0);
  acc += (beta / 2.0 - 1.0) * weights.array().log().sum();
  if (odd) {
    const double shape = beta * (md - static_cast<double>(params.n)) / 2.0;
    acc += (shape - 1.0) * std::log(*w0) - std::lgamma(shape);
  }
  return acc;
}

double hermitian_logdensity(const HermitianConfig& config, const DensityParams& dp) {
  const EnsembleParams& p = dp.params;
  p.validate();
  if (config.z.size() != p.N()) throw ParameterError("configuration dimension does not match the ensemble");
  const VectorXd z = eig::sort_by_modulus(config.z);
  if (!eig::is_sign_alternating(z)) return kNegInf;
  const double sum = z.sum();

  const double core = hermitian_core(z, p.beta, point_power(p));
  const double md = static_cast<double>(p.m);
  auto fixed_part = [&](double l) {
    return -log_fixed_constant(p) + (1.0 - md * p.beta / 2.0) * std::log(l) + l * l / 4.0 + core;
  };
  switch (dp.mode) {
    case LMode::Fixed:
      if (std::abs(sum - dp.l) > 1e-9 * std::max(1.0, dp.l)) return kNegInf;
      return fixed_part(dp.l);
    case LMode::ChiRandom:
      return -log_random_constant(p) + core;
    case LMode::Custom:
      return dp.log_l_density(sum) + fixed_part(sum);
  }
  return kNegInf;
}

double nonhermitian_logdensity(const ComplexConfig& config, const DensityParams& dp) {
  const EnsembleParams& p = dp.params;
  p.validate();
  if (dp.mode == LMode::Fixed) throw ParameterError("non-Hermitian density needs a random coupling law");
  if (config.N() != p.N()) throw ParameterError("configuration dimension does not match the ensemble");
  if (config.pair_y.size() != config.M()) throw ParameterError("pair coordinates have mismatched sizes");
  if ((config.imag_points.array() <= 0.0).any() || (config.pair_y.array() <= 0.0).any() ||
      (config.pair_x.array() == 0.0).any())
    return kNegInf;

  const VectorXc z = config.points();
  const double l = z.sum().imag();
  const double beta = p.beta;
  const double md = static_cast<double>(p.m);
  const double power = point_power(p);

  double acc = dp.log_l_density(l) - log_fixed_constant(p) + (1.0 - md * beta / 2.0) * std::log(l) - l * l / 4.0;
  Complex sum_sq = 0.0;
  for (Index j = 0; j < z.size(); ++j) {
    acc += power * std::log(std::abs(z(j)));
    sum_sq += z(j) * z(j);
  }
  acc -= 0.25 * sum_sq.real();
  for (Index j = 0; j < z.size(); ++j)
    for (Index k = j + 1; k < z.size(); ++k) acc += std::log(std::abs(z(j) - z(k)));
  if (beta != 2.0) {
    double pairs = 0.0;
    for (Index j = 0; j < z.size(); ++j)
      for (Index k = 0; k < z.size(); ++k) pairs += std::log(std::abs(z(j) - std::conj(z(k))));
    acc += 0.25 * (beta - 2.0) * pairs;
  }
  acc -= std::lgamma(static_cast<double>(config.L()) + 1.0) + std::lgamma(static_cast<double>(config.M()) + 1.0);
  return acc;
}

CharPoly coeffs_from_spectral(const VectorXd& lambdas, const VectorXd& weights, std::optional<double> w0, double l,
                              Perturbation kind) {
  const Index s = lambdas.size();
  if (s < 1 || weights.size() != s) throw ParameterError("coeffs_from_spectral: lambdas and weights must match");
  if (kind == Perturbation::None) throw ParameterError("coeffs_from_spectral: perturbation kind required");
  const Complex c = kind == Perturbation::Hermitian ? Complex(l, 0.0) : Complex(0.0, l);
  const VectorXd u = lambdas.cwiseAbs2();

  const std::vector<double> P = product_poly(u);
  std::vector<double> S(static_cast<std::size_t>(s), 0.0);
  for (Index j = 0; j < s; ++j) {
    const auto term = product_poly(u, j);
    for (std::size_t k = 0; k < term.size(); ++k) S[k] += weights(j) * term[k];
  }

  CharPoly cp;
  if (!w0) {
    cp.kappa = VectorXc::Zero(2 * s + 1);
    for (Index j = 0; j <= s; ++j) cp.kappa(2 * j) = P[j];
    for (Index j = 0; j < s; ++j) cp.kappa(2 * j + 1) = -c * S[j];
  } else {
    cp.kappa = VectorXc::Zero(2 * s + 2);
    for (Index j = 0; j <= s; ++j) {
      cp.kappa(2 * j + 1) = P[j];
      const double shifted = (j > 0 ? S[j - 1] : 0.0) + *w0 * P[j];
      cp.kappa(2 * j) = -c * shifted;
    }
  }
  return cp;
}

}  // namespace chiral::densities
