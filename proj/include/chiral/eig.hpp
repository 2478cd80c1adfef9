#pragma once

#include <vector>

#include "chiral/models.hpp"
#include "chiral/types.hpp"

namespace chiral::eig {

using models::JacobiMatrix;
using models::PerturbedJacobi;

/// mu = w0 delta_0 + sum_j (w_j / 2)(delta_{lambda_j} + delta_{-lambda_j}),
/// lambdas strictly decreasing and positive; w0 is present iff N is odd.
struct SpectralMeasure {
  VectorXd lambdas;
  VectorXd weights;
  double w0 = 0.0;
  bool has_w0 = false;

  Index N() const { return 2 * lambdas.size() + (has_w0 ? 1 : 0); }
  double total_weight() const { return weights.sum() + w0; }
  // int x^k d mu
  double moment(int k) const;
};

/// Eigenvalues of J + l E11 sorted as z1 > -z2 > z3 > ... > 0.
struct HermitianConfig {
  VectorXd z;
};

/// Eigenvalues of J + i l E11 as an element of X_{L,M}: L points i y on the
/// imaginary axis and M mirror pairs +-x + i y.
struct ComplexConfig {
  VectorXd imag_points;  // y_1 > ... > y_L > 0
  VectorXd pair_x;       // x_j > 0, decreasing
  VectorXd pair_y;       // y_j > 0
  // Set when some root sat inside the classification band of both classes.
  bool ambiguous = false;
  double classification_tol = 0.0;

  Index L() const { return imag_points.size(); }
  Index M() const { return pair_x.size(); }
  Index N() const { return L() + 2 * M(); }
  // i y_1..i y_L, then x_j + i y_j, -x_j + i y_j for each pair.
  VectorXc points() const;
};

/// Monic det(z - matrix) = sum_j kappa_j z^j, kappa(N) == 1.
struct CharPoly {
  VectorXc kappa;

  Index degree() const { return kappa.size() - 1; }
  Complex operator()(Complex z) const;
};

// Three-term determinant recurrence p_k = (z - d_k) p_{k-1} - a_{k-1}^2 p_{k-2}
// with only d_1 = coupling nonzero; coefficients low-to-high.
template <typename Scalar>
Vector<Scalar> tridiagonal_charpoly(const VectorXd& a, Scalar coupling);

CharPoly char_poly(const PerturbedJacobi& pj);

/// Eigen-decomposition of a real symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts (EISPACK tql2 layout). Eigenvalues ascending; columns of
/// `vectors` are orthonormal eigenvectors.
struct TridiagonalEigen {
  VectorXd values;
  MatrixXd vectors;
};
TridiagonalEigen symmetric_tridiagonal_eigen(const VectorXd& diag, const VectorXd& offdiag);

struct HermitianEig {
  HermitianConfig config;
  VectorXd first_components;  // <v_j, e1>, same order as config.z
};

HermitianEig eig_hermitian(const PerturbedJacobi& pj);

// z1 > -z2 > z3 > ... > (-1)^(N-1) z_N > 0 (strict). With allow_ties, adjacent
// moduli may also be equal, as happens when a split is below double resolution.
bool is_sign_alternating(const VectorXd& z, bool allow_ties = false);

// Sort by decreasing modulus (the sign-alternating presentation).
VectorXd sort_by_modulus(const VectorXd& z);

/// All N eigenvalues of J + i l E11 without classification: Aberth-Ehrlich on the
/// real polynomial Q(w) = i^N kappa(w / i), evaluated through its own real
/// three-term recurrence, mapped back by z = -i w. Falls back to the real
/// Hessenberg QR of the matching real tridiagonal matrix on stagnation.
VectorXc nonhermitian_roots(const PerturbedJacobi& pj);

// Imag-axis threshold used by classification: 1e-9 (1 + |z|).
inline constexpr double kClassificationTol = 1e-9;

/// Classify raw upper-half-plane points into X_{L,M}; mirror partners are averaged.
ComplexConfig classify(const VectorXc& points, double tol = kClassificationTol);

ComplexConfig eig_nonhermitian(const PerturbedJacobi& pj);

/// Spectral measure of J with respect to e1.
SpectralMeasure spectral_measure(const JacobiMatrix& J);

/// Inverse map: Lanczos with full reorthogonalization on the symmetric discrete
/// measure. Throws NumericalFailure when a diagonal coefficient fails to vanish
/// and Inconsistency when a recurrence norm collapses.
JacobiMatrix reconstruct_jacobi(const SpectralMeasure& sm);

/// Recover (J, l) from the eigenvalues of J + l E11.
PerturbedJacobi reconstruct_perturbed(const HermitianConfig& config);
/// Recover (J, l) from the eigenvalues of J + i l E11.
PerturbedJacobi reconstruct_perturbed(const ComplexConfig& config);

// Spectral data of J recovered from perturbed eigenvalues (shared by both inverse maps).
SpectralMeasure spectral_from_perturbed(const VectorXc& points, Complex coupling);

}  // namespace chiral::eig
