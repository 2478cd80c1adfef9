#pragma once

#include <functional>
#include <optional>

#include "chiral/eig.hpp"
#include "chiral/models.hpp"
#include "chiral/types.hpp"

namespace chiral::densities {

using eig::CharPoly;
using eig::ComplexConfig;
using eig::HermitianConfig;
using models::EnsembleParams;
using models::Perturbation;

enum class LMode { Fixed, ChiRandom, Custom };

/// Law of the coupling l. ChiRandom is l ~ sqrt(2) chi_{beta m / 2}; Custom
/// carries a log-density that must be finite on l > 0 and integrate to 1.
struct DensityParams {
  EnsembleParams params;
  LMode mode = LMode::Fixed;
  double l = 1.0;
  std::function<double(double)> log_F;

  static DensityParams fixed(const EnsembleParams& p, double l);
  static DensityParams chi(const EnsembleParams& p);
  static DensityParams custom(const EnsembleParams& p, std::function<double(double)> log_F);

  // log F(l) for the random modes.
  double log_l_density(double l) const;
};

// All constants are returned as natural logarithms.
double log_h(double beta, Index s, double a);
double log_Z(double beta, Index m, double a);
double log_W(double beta, Index m, Index n, double a);
double log_Z_tilde(double beta, Index m, double a);
double log_W_tilde(double beta, Index m, Index n, double a);

// log of the sqrt(2) chi_{beta m / 2} density at l.
double log_chi_coupling_density(double beta, Index m, double l);

/// Joint law of the spectral data of the chiral ensemble. lambdas are unordered
/// (the density is symmetric); weights pair with lambdas. Free coordinates are
/// (lambda_1..lambda_s, w_1..w_{s-1}) when N is even and (lambda, w_1..w_s)
/// when N is odd. Returns -inf off the support.
double spectral_logdensity(const EnsembleParams& params, const VectorXd& lambdas, const VectorXd& weights,
                           std::optional<double> w0 = std::nullopt);

/// Eigenvalues of J + l E11. Fixed mode: density on the slice sum z = l in the
/// coordinates z_1..z_{N-1}. Random modes: density in z_1..z_N.
/// Any ordering of config.z is accepted. Returns -inf off the support.
double hermitian_logdensity(const HermitianConfig& config, const DensityParams& dp);

/// Eigenvalues of J + i l E11 for random l, as a density in the coordinates
/// (y_1..y_L, x_1, y_1, ..., x_M, y_M) of X_{L,M}, x ranging over the whole line.
double nonhermitian_logdensity(const ComplexConfig& config, const DensityParams& dp);

/// Coefficients of det(z - J - c E11) (c = l or i l) from the spectral data of J.
CharPoly coeffs_from_spectral(const VectorXd& lambdas, const VectorXd& weights, std::optional<double> w0, double l,
                              Perturbation kind);

}  // namespace chiral::densities
