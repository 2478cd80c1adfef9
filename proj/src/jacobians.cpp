#include "chiral/jacobians.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "chiral/densities.hpp"
#include "chiral/error.hpp"

namespace chiral::jacobians {

namespace {

void check_lambdas(const VectorXd& lambdas) {
  if (lambdas.size() < 1) throw ParameterError("jacobian: need at least one lambda");
  for (Index j = 0; j < lambdas.size(); ++j) {
    if (!(lambdas(j) > 0.0)) throw ParameterError("jacobian: lambdas must be positive");
    for (Index k = j + 1; k < lambdas.size(); ++k)
      if (lambdas(j) == lambdas(k)) throw DegenerateInput("jacobian: coincident lambdas");
  }
}

// Free kappa components as a real vector.
VectorXd free_coefficients(const VectorXd& params, Index s, double l, Parity parity, Perturbation kind) {
  const bool even = parity == Parity::Even;
  const VectorXd lambdas = params.head(s);
  VectorXd weights(s);
  std::optional<double> w0;
  if (even) {
    weights.head(s - 1) = params.segment(s, s - 1);
    weights(s - 1) = 1.0 - weights.head(s - 1).sum();
  } else {
    weights = params.segment(s, s);
    w0 = 1.0 - weights.sum();
  }
  const auto cp = densities::coeffs_from_spectral(lambdas, weights, w0, l, kind);
  const Index count = even ? 2 * s - 1 : 2 * s;
  const Index N = even ? 2 * s : 2 * s + 1;
  VectorXd out(count);
  for (Index k = 0; k < count; ++k) {
    const bool real_part = kind == Perturbation::Hermitian || (k % 2) == (N % 2);
    out(k) = real_part ? cp.kappa(k).real() : cp.kappa(k).imag();
  }
  return out;
}

}  // namespace

double jacobian_closed_form(const VectorXd& lambdas, double l, Parity parity, Perturbation kind) {
  if (kind == Perturbation::None) throw ParameterError("jacobian: perturbation kind required");
  if (!(l > 0.0)) throw ParameterError("jacobian: l must be positive");
  check_lambdas(lambdas);
  const Index s = lambdas.size();
  const double sd = static_cast<double>(s);
  const bool even = parity == Parity::Even;
  double acc = sd * std::log(2.0) + (even ? sd - 1.0 : sd) * std::log(l);
  acc += (even ? 1.0 : 3.0) * lambdas.array().log().sum();
  for (Index j = 0; j < s; ++j)
    for (Index k = j + 1; k < s; ++k)
      acc += 2.0 * std::log(std::abs(lambdas(j) * lambdas(j) - lambdas(k) * lambdas(k)));
  return acc;
}

double jacobian_finite_difference(const VectorXd& lambdas, const VectorXd& weights, double l, Parity parity,
                                  Perturbation kind, double step, bool richardson) {
  if (kind == Perturbation::None) throw ParameterError("jacobian: perturbation kind required");
  if (!(step > 0.0)) throw ParameterError("jacobian: step must be positive");
  check_lambdas(lambdas);
  const Index s = lambdas.size();
  if (weights.size() != s) throw ParameterError("jacobian: weights must match lambdas");
  const bool even = parity == Parity::Even;
  const Index dim = even ? 2 * s - 1 : 2 * s;

  VectorXd x(dim);
  x.head(s) = lambdas;
  x.tail(dim - s) = weights.head(dim - s);
  auto central = [&](Index j, double h) -> VectorXd {
    VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    return (free_coefficients(xp, s, l, parity, kind) - free_coefficients(xm, s, l, parity, kind)) / (2.0 * h);
  };
  MatrixXd D(dim, dim);
  for (Index j = 0; j < dim; ++j)
    D.col(j) = richardson ? ((4.0 * central(j, step) - central(j, 2.0 * step)) / 3.0).eval() : central(j, step);
  Eigen::PartialPivLU<MatrixXd> lu(D);
  const MatrixXd& LU = lu.matrixLU();
  double acc = 0.0;
  for (Index j = 0; j < dim; ++j) {
    const double pivot = std::abs(LU(j, j));
    if (pivot == 0.0) throw DegenerateInput("jacobian: singular finite-difference matrix");
    acc += std::log(pivot);
  }
  return acc;
}

JacobianResult compare_jacobians(const VectorXd& lambdas, const VectorXd& weights, double l, Parity parity,
                                 Perturbation kind, double step, bool richardson) {
  JacobianResult r;
  r.closed_form = jacobian_closed_form(lambdas, l, parity, kind);
  r.finite_diff = jacobian_finite_difference(lambdas, weights, l, parity, kind, step, richardson);
  r.rel_error = std::abs(std::expm1(r.closed_form - r.finite_diff));
  return r;
}

std::vector<JacobianCase> full_grid() {
  std::vector<JacobianCase> grid;
  for (Parity parity : {Parity::Even, Parity::Odd})
    for (Index s = 1; s <= 3; ++s)
      for (Perturbation kind : {Perturbation::Hermitian, Perturbation::AntiHermitian}) grid.push_back({parity, s, kind});
  return grid;
}

JacobianReport verify_jacobians(const std::vector<JacobianCase>& grid, int trials, std::uint64_t seed, double step,
                                bool richardson) {
  if (trials < 1) throw ParameterError("verify_jacobians: trials must be >= 1");
  JacobianReport report;
  std::uint64_t stream = 0;
  for (const auto& c : grid) {
    JacobianCaseReport cr;
    cr.c = c;
    random::RngStream rng(seed, stream++);
    const Index s = c.s;
    const Index parts = c.parity == Parity::Even ? s : s + 1;
    for (int t = 0; t < trials; ++t) {
      ++cr.trials;
      VectorXd lambdas(s);
      for (Index j = 0; j < s; ++j) lambdas(j) = 0.5 + 2.5 * rng.uniform();
      std::sort(lambdas.data(), lambdas.data() + s, std::greater<>());
      VectorXd dir(parts);
      for (Index j = 0; j < parts; ++j) dir(j) = -std::log(rng.uniform());
      dir /= dir.sum();
      const double l = 0.5 + 1.5 * rng.uniform();

      bool degenerate = false;
      for (Index j = 0; j + 1 < s; ++j) degenerate |= lambdas(j) - lambdas(j + 1) < 1e-6;
      if (degenerate) {
        ++cr.rejected;
        continue;
      }
      try {
        const auto r = compare_jacobians(lambdas, dir.head(s), l, c.parity, c.kind, step, richardson);
        cr.max_rel_error = std::max(cr.max_rel_error, r.rel_error);
      } catch (const DegenerateInput&) {
        ++cr.rejected;
      }
    }
    report.max_rel_error = std::max(report.max_rel_error, cr.max_rel_error);
    report.rejected += cr.rejected;
    report.cases.push_back(cr);
  }
  return report;
}

}  // namespace chiral::jacobians
