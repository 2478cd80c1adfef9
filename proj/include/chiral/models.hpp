#pragma once

#include <optional>
#include <vector>

#include "chiral/quaternion.hpp"
#include "chiral/random.hpp"
#include "chiral/types.hpp"

namespace chiral::models {

enum class Perturbation { None, Hermitian, AntiHermitian };

/// Chiral ensemble parameters (beta, m, n). X is m x n; the Jacobi model has
/// dimension N = 2m when m <= n and N = 2n + 1 when m >= n + 1.
struct EnsembleParams {
  double beta = 2.0;
  Index m = 1;
  Index n = 1;

  static EnsembleParams make(double beta, Index m, Index n);  // validates
  void validate() const;

  // Even-dimensional (m <= n) case.
  bool even() const { return m <= n; }
  Index N() const { return even() ? 2 * m : 2 * n + 1; }
  // Number of positive spectral points: min(m, n).
  Index s() const { return even() ? m : n; }
  // a = |n - m| + 1 - 2 / beta
  double a() const;
};

/// Dense chiral matrix [[Gamma, X], [X^*, 0]] over R, C or H, with
/// Gamma = l u u^* (Hermitian) or i l u u^* (anti-Hermitian).
struct DenseChiral {
  random::ScalarField field = random::ScalarField::Complex;
  QuaternionMatrix X;
  double l = 0.0;
  QuaternionVector u;  // unit, dimension m; empty when kind == None
  Perturbation kind = Perturbation::None;

  Index m() const { return X.rows(); }
  Index n() const { return X.cols(); }
  double beta() const { return random::beta_of(field); }
};

struct DenseOptions {
  // Use u = e1 instead of a Haar-random unit vector.
  bool gamma_e1 = false;
  // Caller-supplied unit vector (overrides gamma_e1).
  std::optional<QuaternionVector> gamma_vector;
};

DenseChiral sample_dense(const EnsembleParams& params, Perturbation kind, double l, random::RngStream& rng,
                         const DenseOptions& options = {});

// Complex image of the (m + n) x (m + n) block matrix; quaternion entries use
// the 2 x 2 embedding, so beta = 4 yields a 2(m + n) square matrix.
MatrixXc assemble_full(const DenseChiral& d);

// Complex image of an arbitrary quaternion matrix (2x2 blocks iff field == Quaternion).
MatrixXc embed(const QuaternionMatrix& A, random::ScalarField field);

// Quaternion matrix helpers.
QuaternionMatrix adjoint(const QuaternionMatrix& A);
QuaternionMatrix multiply(const QuaternionMatrix& A, const QuaternionMatrix& B);
QuaternionMatrix identity(Index k);
double frobenius(const QuaternionMatrix& A);

/// Unitary (orthogonal / symplectic within the subfield of v) U with
/// U v = |v| e1. Throws DegenerateInput when v == 0.
QuaternionMatrix reflector_to_e1(const QuaternionVector& v);

/// Lower-bidiagonal B = L X R: x on the diagonal, y on the subdiagonal.
struct Bidiagonal {
  VectorXd x;  // min(m, n) entries
  VectorXd y;  // m - 1 entries when m <= n, n entries otherwise
  Index m = 0;
  Index n = 0;

  MatrixXd dense() const;
};

struct BidiagonalizationReport {
  double residual = 0.0;      // |L X R - B|_F
  double left_fixes_e1 = 0.0;  // |L e1 - e1|
};

struct BidiagonalizationResult {
  Bidiagonal B;
  QuaternionMatrix L;
  QuaternionMatrix R;
  BidiagonalizationReport report;
};

/// Alternating right/left Householder reflections. The left reflections act on
/// rows 2..m only, so L e1 = L^* e1 = e1; every pivot is rotated to a positive real.
BidiagonalizationResult bidiagonalize(const QuaternionMatrix& X);
BidiagonalizationResult bidiagonalize(const MatrixXd& X);
BidiagonalizationResult bidiagonalize(const MatrixXc& X);

/// Zero-diagonal symmetric tridiagonal matrix with off-diagonal a_1 .. a_{N-1}.
struct JacobiMatrix {
  VectorXd a;

  Index N() const { return a.size() + 1; }
  MatrixXd dense() const;
};

struct SamplerReport {
  int resampled = 0;  // draws rejected because some a_j < 1e-13
};

inline constexpr double kDegenerateEntry = 1e-13;

/// chGbetaE sampler, any beta > 0: a_{2j-1} = x_j ~ chi_{beta(n-j+1)},
/// a_{2j} = y_j ~ chi_{beta(m-j)}.
JacobiMatrix sample_chiral_jacobi(const EnsembleParams& params, random::RngStream& rng,
                                  SamplerReport* report = nullptr);

// Chi degrees of freedom of a_1 .. a_{N-1} in sampling order.
std::vector<double> chiral_jacobi_dofs(const EnsembleParams& params);

/// sigma with (P A P^*)_{kl} = A_{sigma(k), sigma(l)} (0-based).
std::vector<Index> chiral_permutation(Index m, Index n);

/// Permute [[0, B], [B^*, 0]] to tridiagonal form and strip the trailing zero block.
JacobiMatrix permute_to_jacobi(const Bidiagonal& B);

/// J + l E11 (Hermitian) or J + i l E11 (anti-Hermitian).
struct PerturbedJacobi {
  JacobiMatrix base;
  double l = 0.0;
  Perturbation kind = Perturbation::Hermitian;

  Index N() const { return base.N(); }
  // l or i l
  Complex coupling() const;
  MatrixXc dense() const;
};

PerturbedJacobi perturb(const JacobiMatrix& J, double l, Perturbation kind);

/// sigma for the anti-bidiagonal presentation: descending N, N-2, ... then the
/// other parity ascending; the coupling lands at position floor(N/2) (0-based).
std::vector<Index> antibidiagonal_permutation(Index N);

template <typename Scalar>
Matrix<Scalar> antibidiagonal_form(const PerturbedJacobi& pj);

// Declared explicitly; the real version rejects AntiHermitian input.
template <>
MatrixXd antibidiagonal_form<double>(const PerturbedJacobi& pj);
template <>
MatrixXc antibidiagonal_form<Complex>(const PerturbedJacobi& pj);

struct ReductionReport {
  VectorXc dense_eigenvalues;   // deduplicated for beta = 4
  VectorXc jacobi_eigenvalues;  // perturbed Jacobi spectrum plus the stripped zeros
  double max_discrepancy = 0.0;
  Index dense_zero_count = 0;   // |z| < 1e-10
  Index jacobi_zero_count = 0;  // zeros of the perturbed N x N Jacobi matrix itself
  Index expected_extra_zeros = 0;
  BidiagonalizationReport bidiagonal;
};

/// Push one dense realization through U^* X, bidiagonalization and the
/// permutation, then compare spectra with the dense matrix.
ReductionReport dense_reduction_check(const DenseChiral& d);

// Eigenvalues of assemble_full(d); beta = 4 doubles are merged by nearest pairing.
VectorXc dense_eigenvalues(const DenseChiral& d);

// Merge each eigenvalue with its nearest partner (quaternion doubling); throws
// NumericalFailure when a partner is farther than tol.
VectorXc deduplicate_pairs(const VectorXc& values, double tol = 1e-9);

// Greedy nearest matching of two multisets of equal size; returns max distance.
double matching_distance(const VectorXc& a, const VectorXc& b);

}  // namespace chiral::models
