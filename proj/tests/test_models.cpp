#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

#include "chiral/error.hpp"
#include "chiral/models.hpp"
#include "chiral/random.hpp"

using namespace chiral;
using namespace chiral::models;
using random::RngStream;
using random::ScalarField;

namespace {

std::vector<double> sorted_real(const VectorXc& v) {
  std::vector<double> out;
  for (Index k = 0; k < v.size(); ++k) out.push_back(v(k).real());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> hermitian_eigs(const MatrixXc& A) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(A, Eigen::EigenvaluesOnly);
  return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + A.rows());
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

MatrixXc to_complex(const QuaternionMatrix& Q) {
  MatrixXc out(Q.rows(), Q.cols());
  for (Index i = 0; i < Q.rows(); ++i)
    for (Index j = 0; j < Q.cols(); ++j) out(i, j) = Complex(Q(i, j).w, Q(i, j).x);
  return out;
}

}  // namespace

TEST_CASE("ensemble parameters") {
  const auto even = EnsembleParams::make(2.0, 2, 3);
  CHECK(even.even());
  CHECK(even.N() == 4);
  CHECK(even.a() == 1.0 + 1.0 - 1.0);
  const auto odd = EnsembleParams::make(1.0, 3, 1);
  CHECK_FALSE(odd.even());
  CHECK(odd.N() == 3);
  CHECK(odd.a() == 2.0 + 1.0 - 2.0);
  CHECK(EnsembleParams::make(0.7, 2, 2).a() == doctest::Approx(1.0 - 2.0 / 0.7).epsilon(1e-15));
  for (Index m = 1; m <= 5; ++m)
    for (Index n = 1; n <= 5; ++n)
      CHECK(EnsembleParams::make(2.0, m, n).N() == 2 * std::min(m, n) + (m >= n + 1 ? 1 : 0));
  CHECK_THROWS_AS(EnsembleParams::make(0.0, 1, 1), ParameterError);
  CHECK_THROWS_AS(EnsembleParams::make(2.0, 0, 1), ParameterError);
  CHECK_THROWS_AS(EnsembleParams::make(2.0, 1, 0), ParameterError);
}

TEST_CASE("dense model without perturbation is Hermitian with zero diagonal blocks") {
  RngStream rng(1, 0);
  const auto d = sample_dense(EnsembleParams::make(2.0, 2, 3), Perturbation::None, 0.0, rng);
  const MatrixXc H = assemble_full(d);
  REQUIRE(H.rows() == 5);
  CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(H.topLeftCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(H.bottomRightCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense Hermitian perturbation with u = e1 adds l at the corner") {
  RngStream rng(2, 0);
  DenseOptions opt;
  opt.gamma_e1 = true;
  const auto d = sample_dense(EnsembleParams::make(1.0, 2, 2), Perturbation::Hermitian, 1.0, rng, opt);
  auto plain = d;
  plain.kind = Perturbation::None;
  MatrixXc diff = assemble_full(d) - assemble_full(plain);
  CHECK(diff(0, 0) == Complex(1.0, 0.0));
  diff(0, 0) = 0.0;
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
  CHECK(assemble_full(d).imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("anti-Hermitian perturbation block is skew-Hermitian with norm l") {
  RngStream rng(3, 0);
  const double l = 1.7;
  const auto d = sample_dense(EnsembleParams::make(2.0, 3, 2), Perturbation::AntiHermitian, l, rng);
  auto plain = d;
  plain.kind = Perturbation::None;
  const MatrixXc G = (assemble_full(d) - assemble_full(plain)).topLeftCorner(3, 3);
  CHECK((G + G.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(G.norm() == doctest::Approx(l).epsilon(1e-14));
  // -i Gamma is positive semidefinite of rank one.
  const auto ev = hermitian_eigs(Complex(0.0, -1.0) * G);
  CHECK(ev[2] == doctest::Approx(l).epsilon(1e-13));
  CHECK(std::abs(ev[0]) < 1e-14);
  CHECK(std::abs(ev[1]) < 1e-14);
}

TEST_CASE("quaternion dense model embeds as a 4 x 4 matrix with doubled eigenvalues") {
  RngStream rng(4, 0);
  const auto d = sample_dense(EnsembleParams::make(4.0, 1, 1), Perturbation::None, 0.0, rng);
  const MatrixXc H = assemble_full(d);
  REQUIRE(H.rows() == 4);
  const auto ev = hermitian_eigs(H);
  const double x = d.X(0, 0).abs();
  CHECK(ev[0] == doctest::Approx(-x).epsilon(1e-13));
  CHECK(ev[1] == doctest::Approx(-x).epsilon(1e-13));
  CHECK(ev[2] == doctest::Approx(x).epsilon(1e-13));
  CHECK(ev[3] == doctest::Approx(x).epsilon(1e-13));
}

TEST_CASE("one by one complex chiral matrix has eigenvalues +-|z|") {
  DenseChiral d;
  d.field = ScalarField::Complex;
  d.X = QuaternionMatrix::Zero(1, 1);
  d.X(0, 0) = Quaternion(0.6, -0.8, 0.0, 0.0);
  const auto ev = hermitian_eigs(assemble_full(d));
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dense sampling rejects general beta") {
  RngStream rng(5, 0);
  CHECK_THROWS_AS(sample_dense(EnsembleParams::make(0.7, 2, 2), Perturbation::None, 0.0, rng), Error);
}

TEST_CASE("bidiagonalization of an already bidiagonal matrix is trivial") {
  MatrixXd X = MatrixXd::Zero(2, 3);
  X(0, 0) = 1.5;
  X(1, 0) = 0.25;
  X(1, 1) = 2.0;
  const auto r = bidiagonalize(X);
  CHECK((r.B.dense() - X).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(r.report.residual < 1e-15);
}

TEST_CASE("bidiagonalization preserves singular values and first-row moments") {
  RngStream rng(6, 0);
  for (ScalarField field : {ScalarField::Real, ScalarField::Complex, ScalarField::Quaternion}) {
    for (auto [m, n] : std::vector<std::pair<Index, Index>>{{2, 3}, {3, 2}, {3, 3}, {1, 4}, {4, 1}}) {
      CAPTURE(m);
      CAPTURE(n);
      QuaternionMatrix X(m, n);
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) X(i, j) = random::sample_gaussian(field, random::beta_of(field), rng);
      const auto r = bidiagonalize(X);
      CHECK(r.report.residual < 1e-12);
      CHECK(r.report.left_fixes_e1 < 1e-14);
      CHECK((r.B.x.array() > 0.0).all());
      CHECK((r.B.y.array() > 0.0).all());

      // Singular values of the complex embedding are those of X, doubled for quaternions.
      const MatrixXc E = embed(X, field);
      Eigen::JacobiSVD<MatrixXc> sx(E);
      Eigen::JacobiSVD<MatrixXd> sb(r.B.dense());
      std::vector<double> a(sx.singularValues().data(), sx.singularValues().data() + sx.singularValues().size());
      std::vector<double> b;
      for (Index k = 0; k < sb.singularValues().size(); ++k) {
        b.push_back(sb.singularValues()(k));
        if (field == ScalarField::Quaternion) b.push_back(sb.singularValues()(k));
      }
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(max_diff(a, b) < 1e-12);

      // <e1, (B B^*)^k e1> = <e1, (X X^*)^k e1>.
      const MatrixXc XX = E * E.adjoint();
      const MatrixXd BB = r.B.dense() * r.B.dense().transpose();
      MatrixXc Pk = MatrixXc::Identity(XX.rows(), XX.cols());
      MatrixXd Qk = MatrixXd::Identity(BB.rows(), BB.cols());
      for (int k = 1; k <= 3; ++k) {
        Pk = Pk * XX;
        Qk = Qk * BB;
        CHECK(std::abs(Pk(0, 0).real() - Qk(0, 0)) < 1e-10 * std::max(1.0, Qk(0, 0)));
      }
    }
  }
}

TEST_CASE("chi degrees of freedom of the Jacobi sampler") {
  CHECK(chiral_jacobi_dofs(EnsembleParams::make(2.0, 1, 1)) == std::vector<double>{2.0});
  CHECK(chiral_jacobi_dofs(EnsembleParams::make(2.0, 2, 1)) == std::vector<double>{2.0, 2.0});
  CHECK(chiral_jacobi_dofs(EnsembleParams::make(1.0, 2, 2)) == std::vector<double>{2.0, 1.0, 1.0});
  // m <= n: x_j ~ chi_{beta(n-j+1)}, y_j ~ chi_{beta(m-j)}.
  CHECK(chiral_jacobi_dofs(EnsembleParams::make(0.5, 2, 4)) == std::vector<double>{2.0, 0.5, 1.5});
}

TEST_CASE("Jacobi sampler: positive entries and chi moments") {
  RngStream rng(7, 0);
  const auto p = EnsembleParams::make(2.0, 2, 1);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto J = sample_chiral_jacobi(p, rng);
    REQUIRE(J.N() == 3);
    REQUIRE((J.a.array() > 0.0).all());
    s1 += J.a(0) * J.a(0);
    s2 += J.a(1) * J.a(1);
  }
  // chi_2^2 has mean 2 and standard deviation 2.
  CHECK(std::abs(s1 / n - 2.0) < 4.0 * 2.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 2.0) < 4.0 * 2.0 / std::sqrt(n));

  RngStream small(8, 0);
  SamplerReport report;
  for (int k = 0; k < 1000; ++k) {
    const auto J = sample_chiral_jacobi(EnsembleParams::make(0.05, 3, 3), small, &report);
    REQUIRE((J.a.array() >= kDegenerateEntry).all());
  }
  CHECK(report.resampled >= 0);
}

TEST_CASE("permutation to Jacobi form") {
  SUBCASE("m = n = 1 is already tridiagonal") {
    Bidiagonal B;
    B.x = VectorXd::Constant(1, 1.25);
    B.y.resize(0);
    B.m = 1;
    B.n = 1;
    const auto J = permute_to_jacobi(B);
    CHECK(J.N() == 2);
    CHECK(J.a(0) == 1.25);
  }
  SUBCASE("m = n = 2: same spectrum as the block matrix") {
    RngStream rng(9, 0);
    MatrixXd X(2, 2);
    for (Index k = 0; k < 4; ++k) X(k) = rng.normal();
    const auto B = bidiagonalize(X).B;
    const auto J = permute_to_jacobi(B);
    MatrixXd block = MatrixXd::Zero(4, 4);
    block.topRightCorner(2, 2) = B.dense();
    block.bottomLeftCorner(2, 2) = B.dense().transpose();
    CHECK(max_diff(hermitian_eigs(block.cast<Complex>()), hermitian_eigs(J.dense().cast<Complex>())) < 1e-13);
  }
  SUBCASE("m = 1, n = 3: the stripped block holds two zeros") {
    RngStream rng(10, 0);
    MatrixXd X(1, 3);
    for (Index k = 0; k < 3; ++k) X(k) = rng.normal();
    const auto B = bidiagonalize(X).B;
    const auto J = permute_to_jacobi(B);
    CHECK(J.N() == 2);
    MatrixXd block = MatrixXd::Zero(4, 4);
    block.topRightCorner(1, 3) = B.dense();
    block.bottomLeftCorner(3, 1) = B.dense().transpose();
    const auto full = hermitian_eigs(block.cast<Complex>());
    const auto jac = hermitian_eigs(J.dense().cast<Complex>());
    int zeros = 0;
    for (double v : full) zeros += std::abs(v) < 1e-12;
    CHECK(zeros == 2);
    CHECK(full.front() == doctest::Approx(jac.front()).epsilon(1e-13));
    CHECK(full.back() == doctest::Approx(jac.back()).epsilon(1e-13));
  }
}

TEST_CASE("perturbed Jacobi matrices") {
  JacobiMatrix J;
  J.a = VectorXd::Constant(1, 1.0);
  const auto h = perturb(J, 2.0, Perturbation::Hermitian);
  CHECK(h.dense().trace() == Complex(2.0, 0.0));
  CHECK(perturb(J, 2.0, Perturbation::AntiHermitian).dense().trace() == Complex(0.0, 2.0));
  const auto ev = hermitian_eigs(h.dense());
  CHECK(ev[0] == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-15));
  CHECK(ev[1] == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(perturb(J, 0.0, Perturbation::Hermitian), ParameterError);
  CHECK_THROWS_AS(perturb(J, -1.0, Perturbation::AntiHermitian), ParameterError);
}

TEST_CASE("anti-bidiagonal form") {
  JacobiMatrix J2;
  J2.a = VectorXd::Constant(1, 0.75);
  const MatrixXd A2 = antibidiagonal_form<double>(perturb(J2, 1.5, Perturbation::Hermitian));
  MatrixXd expected(2, 2);
  expected << 0.0, 0.75, 0.75, 1.5;
  CHECK((A2 - expected).cwiseAbs().maxCoeff() == 0.0);

  RngStream rng(11, 0);
  for (Index N : {3, 4, 5, 8}) {
    CAPTURE(N);
    JacobiMatrix J;
    J.a.resize(N - 1);
    for (Index k = 0; k < N - 1; ++k) J.a(k) = 0.5 + rng.uniform();
    const auto pj = perturb(J, 0.8, Perturbation::Hermitian);
    const MatrixXd A = antibidiagonal_form<double>(pj);
    CHECK(max_diff(hermitian_eigs(A.cast<Complex>()), hermitian_eigs(pj.dense())) < 1e-12);
    CHECK((A.array() != 0.0).count() == 2 * (N - 1) + 1);
    const Index mid = N / 2;
    CHECK(A(mid, mid) == 0.8);
    // Nonzeros only on the two central antidiagonals and the middle entry.
    for (Index i = 0; i < N; ++i)
      for (Index j = 0; j < N; ++j)
        if (A(i, j) != 0.0 && !(i == mid && j == mid)) CHECK((i + j == N - 1 || i + j == N - 2 || i + j == N));
    // Undo the permutation entrywise.
    const auto sigma = antibidiagonal_permutation(N);
    MatrixXd back(N, N);
    for (Index k = 0; k < N; ++k)
      for (Index c = 0; c < N; ++c) back(sigma[k], sigma[c]) = A(k, c);
    MatrixXd M = J.dense();
    M(0, 0) = 0.8;
    CHECK((back - M).cwiseAbs().maxCoeff() == 0.0);
    const MatrixXc C = antibidiagonal_form<Complex>(perturb(J, 0.8, Perturbation::AntiHermitian));
    CHECK(C(mid, mid) == Complex(0.0, 0.8));
  }
  CHECK_THROWS_AS(antibidiagonal_form<double>(perturb(J2, 1.0, Perturbation::AntiHermitian)), ParameterError);
}

TEST_CASE("dense and Jacobi paths agree on one realization") {
  RngStream rng(12, 0);
  SUBCASE("beta 2, m = 2, n = 3, Hermitian") {
    const auto rep = dense_reduction_check(sample_dense(EnsembleParams::make(2.0, 2, 3), Perturbation::Hermitian, 1.0, rng));
    CHECK(rep.max_discrepancy < 1e-10);
    CHECK(rep.dense_zero_count == 1);
  }
  SUBCASE("beta 1, m = 3, n = 1, Hermitian: one extra zero") {
    const auto rep = dense_reduction_check(sample_dense(EnsembleParams::make(1.0, 3, 1), Perturbation::Hermitian, 0.5, rng));
    CHECK(rep.max_discrepancy < 1e-10);
    CHECK(rep.dense_zero_count - rep.jacobi_zero_count == 1);
    CHECK(rep.expected_extra_zeros == 1);
  }
  SUBCASE("beta 2, m = n = 1, anti-Hermitian: quadratic formula") {
    const auto d = sample_dense(EnsembleParams::make(2.0, 1, 1), Perturbation::AntiHermitian, 1.0, rng);
    const auto rep = dense_reduction_check(d);
    CHECK(rep.max_discrepancy < 1e-10);
    const double x = d.X(0, 0).abs();
    const Complex root = std::sqrt(Complex(4.0 * x * x - 1.0, 0.0));
    VectorXc expected(2);
    expected << (Complex(0.0, 1.0) + root) / 2.0, (Complex(0.0, 1.0) - root) / 2.0;
    CHECK(matching_distance(rep.dense_eigenvalues, expected) < 1e-12);
    CHECK(matching_distance(rep.jacobi_eigenvalues, expected) < 1e-12);
  }
  SUBCASE("grid of shapes and kinds over many seeds") {
    for (double beta : {1.0, 2.0, 4.0})
      for (auto [m, n] : std::vector<std::pair<Index, Index>>{{2, 3}, {3, 2}, {1, 3}, {3, 1}})
        for (Perturbation kind : {Perturbation::Hermitian, Perturbation::AntiHermitian})
          for (int seed = 0; seed < 20; ++seed) {
            RngStream r(100 + static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(m * 10 + n));
            const auto rep = dense_reduction_check(sample_dense(EnsembleParams::make(beta, m, n), kind, 0.9, r));
            CHECK(rep.max_discrepancy < 1e-10);
          }
  }
}

TEST_CASE("first-row spectral moments of the dense and Jacobi models agree") {
  RngStream rng(13, 0);
  DenseOptions opt;
  opt.gamma_e1 = true;
  for (double beta : {1.0, 2.0, 4.0})
    for (auto [m, n] : std::vector<std::pair<Index, Index>>{{2, 3}, {3, 2}, {2, 2}}) {
      const auto d = sample_dense(EnsembleParams::make(beta, m, n), Perturbation::None, 0.0, rng, opt);
      const MatrixXc H = assemble_full(d);
      const MatrixXd J = permute_to_jacobi(bidiagonalize(d.X).B).dense();
      MatrixXc Hk = MatrixXc::Identity(H.rows(), H.cols());
      MatrixXd Jk = MatrixXd::Identity(J.rows(), J.cols());
      for (int k = 0; k <= 4; ++k) {
        CHECK(std::abs(Hk(0, 0).real() - Jk(0, 0)) < 1e-8 * std::max(1.0, std::abs(Jk(0, 0))));
        Hk = Hk * H;
        Jk = Jk * J;
      }
    }
}

TEST_CASE("quaternion eigenvalue deduplication") {
  VectorXc v(4);
  v << 1.0, -2.0, 1.0 + 1e-12, -2.0;
  const auto d = deduplicate_pairs(v);
  const auto r = sorted_real(d);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == -2.0);
  CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-11));
  VectorXc bad(2);
  bad << 0.0, 1.0;
  CHECK_THROWS_AS(deduplicate_pairs(bad), NumericalFailure);
}
