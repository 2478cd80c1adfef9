#include "chiral/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "chiral/eig.hpp"
#include "chiral/error.hpp"

namespace chiral::models {

using random::ScalarField;

EnsembleParams EnsembleParams::make(double beta, Index m, Index n) {
  EnsembleParams p{beta, m, n};
  p.validate();
  return p;
}

void EnsembleParams::validate() const {
  if (!(beta > 0.0)) throw ParameterError("beta must be positive");
  if (m < 1 || n < 1) throw ParameterError("m and n must be >= 1");
}

double EnsembleParams::a() const { return static_cast<double>(std::abs(n - m)) + 1.0 - 2.0 / beta; }

// ---------------------------------------------------------------------------
// Quaternion matrix helpers

QuaternionMatrix adjoint(const QuaternionMatrix& A) {
  QuaternionMatrix out(A.cols(), A.rows());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) out(j, i) = A(i, j).conj();
  return out;
}

QuaternionMatrix multiply(const QuaternionMatrix& A, const QuaternionMatrix& B) {
  if (A.cols() != B.rows()) throw ParameterError("multiply: inner dimensions differ");
  QuaternionMatrix out(A.rows(), B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < B.cols(); ++j) {
      Quaternion acc;
      for (Index k = 0; k < A.cols(); ++k) acc += A(i, k) * B(k, j);
      out(i, j) = acc;
    }
  return out;
}

QuaternionMatrix identity(Index k) {
  QuaternionMatrix I(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) I(i, j) = Quaternion(i == j ? 1.0 : 0.0);
  return I;
}

double frobenius(const QuaternionMatrix& A) {
  double s = 0.0;
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) s += A(i, j).norm2();
  return std::sqrt(s);
}

MatrixXc embed(const QuaternionMatrix& A, ScalarField field) {
  if (field != ScalarField::Quaternion) {
    MatrixXc out(A.rows(), A.cols());
    for (Index i = 0; i < A.rows(); ++i)
      for (Index j = 0; j < A.cols(); ++j) out(i, j) = Complex(A(i, j).w, A(i, j).x);
    return out;
  }
  MatrixXc out(2 * A.rows(), 2 * A.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) out.block<2, 2>(2 * i, 2 * j) = complex_embedding(A(i, j));
  return out;
}

QuaternionMatrix reflector_to_e1(const QuaternionVector& v) {
  const Index k = v.size();
  double norm2 = 0.0;
  for (Index i = 0; i < k; ++i) norm2 += v(i).norm2();
  const double norm = std::sqrt(norm2);
  if (!(norm > std::numeric_limits<double>::min()))
    throw DegenerateInput("zero pivot during bidiagonalization; resample the input");

  const double head = v(0).abs();
  const Quaternion phase = head > 0.0 ? v(0) / head : Quaternion(1.0);

  // H = I - 2 w w^* / |w|^2 with w = v + phase |v| e1 sends v to -phase |v| e1;
  // w^* v is real, so scalar side conventions do not matter here.
  QuaternionVector w = v;
  w(0) += phase * norm;
  const double wnorm2 = 2.0 * norm * (norm + head);
  QuaternionMatrix U(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      Quaternion h = (w(i) * w(j).conj()) * (-2.0 / wnorm2);
      if (i == j) h += Quaternion(1.0);
      U(i, j) = h;
    }
  // Left-multiply the first row by -conj(phase) so the image is +|v| e1.
  const Quaternion fix = -phase.conj();
  for (Index j = 0; j < k; ++j) U(0, j) = fix * U(0, j);
  return U;
}

// ---------------------------------------------------------------------------
// Dense models

DenseChiral sample_dense(const EnsembleParams& params, Perturbation kind, double l, random::RngStream& rng,
                         const DenseOptions& options) {
  params.validate();
  const ScalarField field = random::field_from_beta(params.beta);
  if (kind != Perturbation::None && !(l >= 0.0)) throw ParameterError("perturbation size l must be >= 0");

  DenseChiral d;
  d.field = field;
  d.kind = kind;
  d.X.resize(params.m, params.n);
  for (Index i = 0; i < params.m; ++i)
    for (Index j = 0; j < params.n; ++j) d.X(i, j) = random::sample_gaussian(field, params.beta, rng);

  if (kind == Perturbation::None) return d;
  d.l = l;
  if (options.gamma_vector) {
    const auto& u = *options.gamma_vector;
    if (u.size() != params.m) throw ParameterError("gamma vector must have dimension m");
    double n2 = 0.0;
    for (Index i = 0; i < u.size(); ++i) n2 += u(i).norm2();
    if (std::abs(n2 - 1.0) > 1e-12) throw ParameterError("gamma vector must be a unit vector");
    d.u = u;
  } else if (options.gamma_e1) {
    d.u = QuaternionVector::Constant(params.m, Quaternion(0.0));
    d.u(0) = Quaternion(1.0);
  } else {
    d.u = random::sample_haar_unit_vector(field, params.m, rng);
  }
  return d;
}

MatrixXc assemble_full(const DenseChiral& d) {
  const Index m = d.m();
  const Index n = d.n();
  const Index b = d.field == ScalarField::Quaternion ? 2 : 1;
  MatrixXc H = MatrixXc::Zero(b * (m + n), b * (m + n));
  const MatrixXc X = embed(d.X, d.field);
  H.block(0, b * m, b * m, b * n) = X;
  H.block(b * m, 0, b * n, b * m) = X.adjoint();
  if (d.kind != Perturbation::None) {
    QuaternionMatrix gamma(m, m);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) gamma(i, j) = d.l * (d.u(i) * d.u(j).conj());
    MatrixXc G = embed(gamma, d.field);
    if (d.kind == Perturbation::AntiHermitian) G *= Complex(0.0, 1.0);
    H.block(0, 0, b * m, b * m) = G;
  }
  return H;
}

// ---------------------------------------------------------------------------
// Bidiagonalization

MatrixXd Bidiagonal::dense() const {
  MatrixXd B = MatrixXd::Zero(m, n);
  for (Index j = 0; j < x.size(); ++j) B(j, j) = x(j);
  for (Index j = 0; j < y.size(); ++j) B(j + 1, j) = y(j);
  return B;
}

namespace {

QuaternionMatrix to_quaternion(const MatrixXd& X) {
  QuaternionMatrix Q(X.rows(), X.cols());
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) Q(i, j) = Quaternion(X(i, j));
  return Q;
}

QuaternionMatrix to_quaternion(const MatrixXc& X) {
  QuaternionMatrix Q(X.rows(), X.cols());
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) Q(i, j) = Quaternion(X(i, j));
  return Q;
}

// A <- A * diag(I, V) acting on columns [start, n); R accumulates the same.
void apply_right(QuaternionMatrix& A, QuaternionMatrix& R, Index start, const QuaternionMatrix& V) {
  const Index k = V.rows();
  for (QuaternionMatrix* M : {&A, &R}) {
    QuaternionMatrix block = M->block(0, start, M->rows(), k);
    M->block(0, start, M->rows(), k) = multiply(block, V);
  }
}

// A <- diag(I, U) * A acting on rows [start, m); L accumulates the same.
void apply_left(QuaternionMatrix& A, QuaternionMatrix& L, Index start, const QuaternionMatrix& U) {
  const Index k = U.rows();
  for (QuaternionMatrix* M : {&A, &L}) {
    QuaternionMatrix block = M->block(start, 0, k, M->cols());
    M->block(start, 0, k, M->cols()) = multiply(U, block);
  }
}

}  // namespace

BidiagonalizationResult bidiagonalize(const QuaternionMatrix& X) {
  const Index m = X.rows();
  const Index n = X.cols();
  if (m < 1 || n < 1) throw ParameterError("bidiagonalize: empty matrix");

  QuaternionMatrix A = X;
  QuaternionMatrix L = identity(m);
  QuaternionMatrix R = identity(n);
  const Index steps = std::min(m, n);
  const Index ycount = m <= n ? m - 1 : n;

  for (Index j = 0; j < steps; ++j) {
    // Row j: columns j..n-1 collapse onto column j.
    QuaternionVector r(n - j);
    for (Index c = j; c < n; ++c) r(c - j) = A(j, c).conj();
    apply_right(A, R, j, adjoint(reflector_to_e1(r)));
    if (j < ycount) {
      // Column j: rows j+1..m-1 collapse onto row j+1; row 0 is never touched.
      QuaternionVector v = A.block(j + 1, j, m - j - 1, 1);
      apply_left(A, L, j + 1, reflector_to_e1(v));
    }
  }

  BidiagonalizationResult out;
  out.B.m = m;
  out.B.n = n;
  out.B.x.resize(steps);
  out.B.y.resize(ycount);
  for (Index j = 0; j < steps; ++j) out.B.x(j) = A(j, j).w;
  for (Index j = 0; j < ycount; ++j) out.B.y(j) = A(j + 1, j).w;

  const MatrixXd B = out.B.dense();
  QuaternionMatrix diff = multiply(multiply(L, X), R);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) diff(i, j) -= Quaternion(B(i, j));
  out.report.residual = frobenius(diff);
  double e1 = 0.0;
  for (Index i = 0; i < m; ++i) e1 += (L(i, 0) - Quaternion(i == 0 ? 1.0 : 0.0)).norm2();
  out.report.left_fixes_e1 = std::sqrt(e1);
  out.L = std::move(L);
  out.R = std::move(R);
  return out;
}

BidiagonalizationResult bidiagonalize(const MatrixXd& X) { return bidiagonalize(to_quaternion(X)); }
BidiagonalizationResult bidiagonalize(const MatrixXc& X) { return bidiagonalize(to_quaternion(X)); }

// ---------------------------------------------------------------------------
// Jacobi models

MatrixXd JacobiMatrix::dense() const {
  const Index N = this->N();
  MatrixXd J = MatrixXd::Zero(N, N);
  for (Index j = 0; j + 1 < N; ++j) J(j, j + 1) = J(j + 1, j) = a(j);
  return J;
}

std::vector<double> chiral_jacobi_dofs(const EnsembleParams& params) {
  params.validate();
  const double beta = params.beta;
  const auto m = static_cast<double>(params.m);
  const auto n = static_cast<double>(params.n);
  std::vector<double> dofs;
  for (Index j = 1; j <= params.s(); ++j) {
    const auto jd = static_cast<double>(j);
    dofs.push_back(beta * (n - jd + 1.0));                   // x_j
    if (!params.even() || j < params.m) dofs.push_back(beta * (m - jd));  // y_j
  }
  return dofs;
}

JacobiMatrix sample_chiral_jacobi(const EnsembleParams& params, random::RngStream& rng, SamplerReport* report) {
  const auto dofs = chiral_jacobi_dofs(params);
  JacobiMatrix J;
  J.a.resize(static_cast<Index>(dofs.size()));
  for (;;) {
    bool degenerate = false;
    for (std::size_t j = 0; j < dofs.size(); ++j) {
      J.a(static_cast<Index>(j)) = random::sample_chi(dofs[j], rng);
      degenerate = degenerate || J.a(static_cast<Index>(j)) < kDegenerateEntry;
    }
    if (!degenerate) return J;
    if (report) ++report->resampled;
  }
}

std::vector<Index> chiral_permutation(Index m, Index n) {
  std::vector<Index> sigma(static_cast<std::size_t>(m + n));
  const Index s = std::min(m, n);
  Index k = 0;
  for (Index i = 0; i < s; ++i) {
    sigma[k++] = i;      // row i of the top block
    sigma[k++] = m + i;  // column i of the bottom block
  }
  if (m <= n) {
    for (Index i = m; i < n; ++i) sigma[k++] = m + i;
  } else {
    for (Index i = n; i < m; ++i) sigma[k++] = i;
  }
  return sigma;
}

JacobiMatrix permute_to_jacobi(const Bidiagonal& B) {
  const Index m = B.m;
  const Index n = B.n;
  MatrixXd G = MatrixXd::Zero(m + n, m + n);
  const MatrixXd Bd = B.dense();
  G.block(0, m, m, n) = Bd;
  G.block(m, 0, n, m) = Bd.transpose();

  const auto sigma = chiral_permutation(m, n);
  const Index N = m <= n ? 2 * m : 2 * n + 1;
  JacobiMatrix J;
  J.a.resize(N - 1);
  for (Index k = 0; k + 1 < N; ++k) J.a(k) = G(sigma[k], sigma[k + 1]);
  return J;
}

Complex PerturbedJacobi::coupling() const {
  return kind == Perturbation::AntiHermitian ? Complex(0.0, l) : Complex(l, 0.0);
}

MatrixXc PerturbedJacobi::dense() const {
  MatrixXc M = base.dense().cast<Complex>();
  M(0, 0) = coupling();
  return M;
}

PerturbedJacobi perturb(const JacobiMatrix& J, double l, Perturbation kind) {
  if (!(l > 0.0)) throw ParameterError("perturb: l must be positive");
  if (kind == Perturbation::None) throw ParameterError("perturb: kind must be Hermitian or AntiHermitian");
  return PerturbedJacobi{J, l, kind};
}

std::vector<Index> antibidiagonal_permutation(Index N) {
  std::vector<Index> sigma;
  sigma.reserve(static_cast<std::size_t>(N));
  for (Index k = N - 1; k >= 0; k -= 2) sigma.push_back(k);
  for (Index k = (N % 2 == 0) ? 0 : 1; k < N; k += 2) sigma.push_back(k);
  return sigma;
}

namespace {

template <typename Scalar>
Matrix<Scalar> permuted(const Matrix<Scalar>& A, const std::vector<Index>& sigma) {
  const Index N = A.rows();
  Matrix<Scalar> out(N, N);
  for (Index k = 0; k < N; ++k)
    for (Index c = 0; c < N; ++c) out(k, c) = A(sigma[k], sigma[c]);
  return out;
}

}  // namespace

template <>
MatrixXd antibidiagonal_form<double>(const PerturbedJacobi& pj) {
  if (pj.kind != Perturbation::Hermitian) throw ParameterError("real anti-bidiagonal form needs a Hermitian perturbation");
  MatrixXd M = pj.base.dense();
  M(0, 0) = pj.l;
  return permuted(M, antibidiagonal_permutation(pj.N()));
}

template <>
MatrixXc antibidiagonal_form<Complex>(const PerturbedJacobi& pj) {
  return permuted(pj.dense(), antibidiagonal_permutation(pj.N()));
}

// ---------------------------------------------------------------------------
// Dense <-> Jacobi comparison

VectorXc deduplicate_pairs(const VectorXc& values, double tol) {
  if (values.size() % 2 != 0) throw NumericalFailure("deduplicate_pairs: odd number of eigenvalues");
  std::vector<Complex> rest(values.data(), values.data() + values.size());
  VectorXc out(values.size() / 2);
  Index k = 0;
  while (!rest.empty()) {
    const Complex head = rest.back();
    rest.pop_back();
    auto best = rest.end();
    double best_dist = std::numeric_limits<double>::infinity();
    for (auto it = rest.begin(); it != rest.end(); ++it) {
      const double dist = std::abs(*it - head);
      if (dist < best_dist) {
        best_dist = dist;
        best = it;
      }
    }
    if (best_dist > tol) throw NumericalFailure("quaternion eigenvalue without a partner within tolerance");
    out(k++) = 0.5 * (head + *best);
    rest.erase(best);
  }
  return out;
}

double matching_distance(const VectorXc& a, const VectorXc& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<Complex> pool(b.data(), b.data() + b.size());
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    auto best = pool.begin();
    double best_dist = std::numeric_limits<double>::infinity();
    for (auto it = pool.begin(); it != pool.end(); ++it) {
      const double dist = std::abs(*it - a(i));
      if (dist < best_dist) {
        best_dist = dist;
        best = it;
      }
    }
    worst = std::max(worst, best_dist);
    pool.erase(best);
  }
  return worst;
}

VectorXc dense_eigenvalues(const DenseChiral& d) {
  const MatrixXc H = assemble_full(d);
  VectorXc values;
  if (d.kind == Perturbation::AntiHermitian) {
    Eigen::ComplexEigenSolver<MatrixXc> solver(H, false);
    if (solver.info() != Eigen::Success) throw NumericalFailure("dense eigensolver failed");
    values = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalFailure("dense eigensolver failed");
    values = solver.eigenvalues().cast<Complex>();
  }
  if (d.field == ScalarField::Quaternion) values = deduplicate_pairs(values);
  return values;
}

namespace {

constexpr double kZeroTol = 1e-10;

Index count_zeros(const VectorXc& v) {
  Index c = 0;
  for (Index i = 0; i < v.size(); ++i) c += std::abs(v(i)) < kZeroTol ? 1 : 0;
  return c;
}

}  // namespace

ReductionReport dense_reduction_check(const DenseChiral& d) {
  if (d.kind == Perturbation::None) throw ParameterError("dense_reduction_check needs a perturbation");
  const Index m = d.m();
  const Index n = d.n();

  // U e1 = u, so U^* Gamma U = l E11 (times i in the anti-Hermitian case).
  QuaternionMatrix U = adjoint(reflector_to_e1(d.u));
  const QuaternionMatrix Y = multiply(adjoint(U), d.X);
  const auto bd = bidiagonalize(Y);
  const JacobiMatrix J = permute_to_jacobi(bd.B);
  const PerturbedJacobi pj = perturb(J, d.l, d.kind);

  ReductionReport report;
  report.bidiagonal = bd.report;
  report.dense_eigenvalues = dense_eigenvalues(d);

  const Index N = J.N();
  VectorXc jac = VectorXc::Zero(m + n);
  if (d.kind == Perturbation::Hermitian) {
    jac.head(N) = eig::eig_hermitian(pj).config.z.cast<Complex>();
  } else {
    jac.head(N) = eig::nonhermitian_roots(pj);
  }
  report.jacobi_zero_count = count_zeros(jac.head(N));
  report.jacobi_eigenvalues = jac;
  report.expected_extra_zeros = m + n - N;
  report.dense_zero_count = count_zeros(report.dense_eigenvalues);

  if (d.kind == Perturbation::Hermitian) {
    std::vector<double> a(static_cast<std::size_t>(jac.size())), b(static_cast<std::size_t>(jac.size()));
    for (Index i = 0; i < jac.size(); ++i) {
      a[i] = jac(i).real();
      b[i] = report.dense_eigenvalues(i).real();
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    report.max_discrepancy = worst;
  } else {
    report.max_discrepancy = matching_distance(jac, report.dense_eigenvalues);
  }
  return report;
}

}  // namespace chiral::models
