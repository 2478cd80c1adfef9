#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "chiral/types.hpp"

namespace chiral::stats {

inline constexpr double kDefaultAlpha = 0.001;

struct KsReport {
  double D = 0.0;
  Index n1 = 0;
  std::optional<Index> n2;  // absent for the one-sample test
  double threshold = 0.0;
  bool pass = false;
};

// Asymptotic Kolmogorov critical value c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_critical_value(double alpha);

/// Exact sup-distance between the two empirical CDFs; ties are stepped together.
KsReport ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha = kDefaultAlpha);

/// Exact sup-distance between the empirical CDF and `cdf`. Throws ParameterError
/// when `cdf` decreases across the sorted sample or leaves [0, 1].
KsReport ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf,
                       double alpha = kDefaultAlpha);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  Index n = 0;
};
MeanEstimate mean_estimate(const std::vector<double>& x);

// ---------------------------------------------------------------------------
// Quadrature

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod. Infinite endpoints are mapped to
/// a finite interval (x = a + t / (1 - t), or x = t / (1 - t^2) for the whole
/// line). Throws AccuracyError (with the estimate) when the budget runs out.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-10, int max_subdivisions = 2000);

// log of the integrand at a point.
using LogIntegrand = std::function<double(const std::vector<double>&)>;
// Bounds of one axis given the outer coordinates x_0..x_{k-1}.
using AxisBounds = std::function<std::pair<double, double>(const std::vector<double>& outer)>;

/// Nested adaptive integral of exp(log_f) over at most three axes; axis k may
/// depend on the coordinates of axes 0..k-1. `tol` is the relative tolerance of
/// the outermost level; each inner level is ten times tighter.
double quad_nd(const LogIntegrand& log_f, const std::vector<AxisBounds>& axes, double tol = 1e-9);

// Constant bounds helper.
AxisBounds fixed_bounds(double lo, double hi);

/// CDF of a density known up to normalization, tabulated on `knots` points and
/// interpolated by cubic Hermite pieces (the density supplies the slopes).
class TabulatedCdf {
 public:
  TabulatedCdf(const std::function<double(double)>& density, double lo, double hi, int knots = 2000,
               double rel_tol = 1e-10);

  double operator()(double x) const;
  // Integral of the unnormalized density over (lo, hi).
  double mass() const { return mass_; }

 private:
  std::vector<double> x_;
  std::vector<double> F_;
  std::vector<double> f_;
  double mass_ = 0.0;
};

}  // namespace chiral::stats
