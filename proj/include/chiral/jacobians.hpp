#pragma once

#include <vector>

#include "chiral/models.hpp"
#include "chiral/random.hpp"
#include "chiral/types.hpp"

namespace chiral::jacobians {

using models::Perturbation;

enum class Parity { Even, Odd };

// Both values are logarithms of |det|.
struct JacobianResult {
  double closed_form = 0.0;
  double finite_diff = 0.0;
  double rel_error = 0.0;  // |exp(closed - fd) - 1|
};

/// log |d(kappa subset) / d(lambda, w)| in closed form:
/// even 2^m l^(m-1) prod lambda_j prod_{j<k} |lambda_j^2 - lambda_k^2|^2,
/// odd  2^n l^n prod lambda_j^3 prod_{j<k} |lambda_j^2 - lambda_k^2|^2.
/// Identical for both perturbation kinds.
double jacobian_closed_form(const VectorXd& lambdas, double l, Parity parity, Perturbation kind);

/// Central-difference Jacobian of (lambda_1..lambda_s, free weights) -> free
/// kappa components. Free weights are w_1..w_{s-1} (even; w_s = 1 - sum) or
/// w_1..w_s (odd; w0 = 1 - sum). `weights` holds all s weights.
/// With `richardson`, the derivatives combine steps h and 2h to cancel the
/// h^2 term, so a larger step can be used where rounding dominates (nearly
/// coincident lambdas).
double jacobian_finite_difference(const VectorXd& lambdas, const VectorXd& weights, double l, Parity parity,
                                  Perturbation kind, double step = 1e-5, bool richardson = false);

JacobianResult compare_jacobians(const VectorXd& lambdas, const VectorXd& weights, double l, Parity parity,
                                 Perturbation kind, double step = 1e-5, bool richardson = false);

struct JacobianCase {
  Parity parity = Parity::Even;
  Index s = 1;
  Perturbation kind = Perturbation::Hermitian;
};

struct JacobianCaseReport {
  JacobianCase c;
  int trials = 0;
  int rejected = 0;
  double max_rel_error = 0.0;
};

struct JacobianReport {
  std::vector<JacobianCaseReport> cases;
  double max_rel_error = 0.0;
  int rejected = 0;
};

/// Random interior points: lambdas uniform on [0.5, 3] (sorted), weights flat
/// Dirichlet, l uniform on [0.5, 2]. Points with nearly coincident lambdas are
/// counted as rejected.
JacobianReport verify_jacobians(const std::vector<JacobianCase>& grid, int trials, std::uint64_t seed,
                                double step = 1e-5, bool richardson = false);

std::vector<JacobianCase> full_grid();

}  // namespace chiral::jacobians
