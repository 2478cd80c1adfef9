#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "chiral/eig.hpp"
#include "chiral/error.hpp"
#include "chiral/models.hpp"
#include "chiral/random.hpp"

using namespace chiral;
using namespace chiral::eig;
using models::EnsembleParams;
using models::Perturbation;
using random::RngStream;

namespace {

JacobiMatrix jacobi(std::initializer_list<double> a) {
  JacobiMatrix J;
  J.a = Eigen::Map<const VectorXd>(a.begin(), static_cast<Index>(a.size()));
  return J;
}

JacobiMatrix random_jacobi(Index N, RngStream& rng) {
  JacobiMatrix J;
  J.a.resize(N - 1);
  for (Index k = 0; k < N - 1; ++k) J.a(k) = 0.3 + 2.0 * rng.uniform();
  return J;
}

// Eigenvalues of a general complex matrix by Eigen's dense solver.
VectorXc dense_eigenvalues(const MatrixXc& A) { return Eigen::ComplexEigenSolver<MatrixXc>(A, false).eigenvalues(); }

double matching(const VectorXc& a, const VectorXc& b) { return models::matching_distance(a, b); }

}  // namespace

TEST_CASE("characteristic polynomial coefficients") {
  const auto h = char_poly(models::perturb(jacobi({1.0}), 2.0, Perturbation::Hermitian));
  REQUIRE(h.degree() == 2);
  CHECK(h.kappa(2) == Complex(1.0));
  CHECK(h.kappa(1) == Complex(-2.0));
  CHECK(h.kappa(0) == Complex(-1.0));

  const auto ah = char_poly(models::perturb(jacobi({1.0}), 2.0, Perturbation::AntiHermitian));
  CHECK(ah.kappa(2) == Complex(1.0));
  CHECK(ah.kappa(1) == Complex(0.0, -2.0));
  CHECK(ah.kappa(0) == Complex(-1.0));

  // det(z - [[1,1,0],[1,0,1],[0,1,0]]) = z^3 - z^2 - 2z + 1.
  const auto h3 = char_poly(models::perturb(jacobi({1.0, 1.0}), 1.0, Perturbation::Hermitian));
  CHECK(h3.kappa(3) == Complex(1.0));
  CHECK(h3.kappa(2) == Complex(-1.0));
  CHECK(h3.kappa(1) == Complex(-2.0));
  CHECK(h3.kappa(0) == Complex(1.0));
}

TEST_CASE("characteristic polynomial parity and agreement with dense determinants") {
  RngStream rng(1, 0);
  for (Index N : {2, 3, 6, 9}) {
    const auto J = random_jacobi(N, rng);
    const auto h = char_poly(models::perturb(J, 0.7, Perturbation::Hermitian));
    const auto ah = char_poly(models::perturb(J, 0.7, Perturbation::AntiHermitian));
    CHECK(h.kappa.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.kappa(N - 1) == Complex(-0.7));
    CHECK(std::abs(ah.kappa(N - 1) - Complex(0.0, -0.7)) < 1e-15);
    // kappa_{N-2k} real, kappa_{N-2k-1} imaginary.
    for (Index j = 0; j <= N; ++j) {
      const double forbidden = (N - j) % 2 == 0 ? ah.kappa(j).imag() : ah.kappa(j).real();
      CHECK(std::abs(forbidden) < 1e-12);
    }
    // Values at a test point match det(z - A).
    const Complex z(0.3, 0.4);
    for (const auto& [poly, kind] : {std::pair{h, Perturbation::Hermitian}, std::pair{ah, Perturbation::AntiHermitian}}) {
      const MatrixXc A = models::perturb(J, 0.7, kind).dense();
      const Complex det = (z * MatrixXc::Identity(N, N) - A).determinant();
      CHECK(std::abs(poly(z) - det) < 1e-12 * std::max(1.0, std::abs(det)));
    }
  }
}

TEST_CASE("tridiagonal QL solver") {
  RngStream rng(2, 0);
  for (Index N : {1, 2, 5, 17, 60}) {
    VectorXd d(N), e(std::max<Index>(N - 1, 0));
    for (Index k = 0; k < N; ++k) d(k) = rng.normal();
    for (Index k = 0; k + 1 < N; ++k) e(k) = rng.normal();
    const auto te = symmetric_tridiagonal_eigen(d, e);
    MatrixXd T = d.asDiagonal();
    for (Index k = 0; k + 1 < N; ++k) T(k, k + 1) = T(k + 1, k) = e(k);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
    CHECK((te.values - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, T.norm()));
    CHECK((T * te.vectors - te.vectors * te.values.asDiagonal()).norm() < 1e-12 * std::max(1.0, T.norm()));
    CHECK((te.vectors.transpose() * te.vectors - MatrixXd::Identity(N, N)).norm() < 1e-12);
  }
}

TEST_CASE("Hermitian eigenvalues of the two by two example") {
  const auto r = eig_hermitian(models::perturb(jacobi({1.0}), 2.0, Perturbation::Hermitian));
  CHECK(r.config.z(0) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.config.z(1) == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-15));
  CHECK(is_sign_alternating(r.config.z));
  // First components: |<v, e1>|^2 sum to one.
  CHECK(r.first_components.squaredNorm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Hermitian eigenvalues: trace, alternation and polynomial roots") {
  RngStream rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto J6 = models::sample_chiral_jacobi(EnsembleParams::make(2.0, 3, 4), rng);
    const double l = 0.1 + 3.0 * rng.uniform();
    const auto z6 = eig_hermitian(models::perturb(J6, l, Perturbation::Hermitian)).config.z;
    CHECK(std::abs(z6.sum() - l) < 1e-12);
    CHECK(is_sign_alternating(z6));

    const auto J8 = models::sample_chiral_jacobi(EnsembleParams::make(1.0, 4, 4), rng);
    const auto pj = models::perturb(J8, l, Perturbation::Hermitian);
    const auto z8 = eig_hermitian(pj).config.z;
    // Roots of the characteristic polynomial via its companion matrix.
    const auto kappa = char_poly(pj).kappa;
    MatrixXc C = MatrixXc::Zero(8, 8);
    for (Index k = 1; k < 8; ++k) C(k, k - 1) = 1.0;
    for (Index k = 0; k < 8; ++k) C(k, 7) = -kappa(k);
    CHECK(matching(z8.cast<Complex>(), dense_eigenvalues(C)) < 1e-9);
  }
}

TEST_CASE("sign alternation predicate") {
  CHECK(is_sign_alternating(Eigen::Vector3d(3.0, -2.0, 1.0)));
  CHECK_FALSE(is_sign_alternating(Eigen::Vector3d(3.0, 2.0, 1.0)));
  CHECK_FALSE(is_sign_alternating(Eigen::Vector3d(3.0, -3.0, 1.0)));
  CHECK(is_sign_alternating(Eigen::Vector3d(3.0, -3.0, 1.0), true));
  CHECK_FALSE(is_sign_alternating(Eigen::Vector2d(-2.0, 1.0)));
  CHECK_FALSE(is_sign_alternating(Eigen::Vector2d(2.0, 0.0)));
}

TEST_CASE("anti-Hermitian eigenvalues of the two by two examples") {
  SUBCASE("2 a1 > l: one mirror pair") {
    const auto c = eig_nonhermitian(models::perturb(jacobi({1.0}), 1.0, Perturbation::AntiHermitian));
    REQUIRE(c.M() == 1);
    REQUIRE(c.L() == 0);
    CHECK(c.pair_x(0) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
    CHECK(c.pair_y(0) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("2 a1 < l: two imaginary points") {
    const auto c = eig_nonhermitian(models::perturb(jacobi({0.4}), 1.0, Perturbation::AntiHermitian));
    REQUIRE(c.L() == 2);
    REQUIRE(c.M() == 0);
    CHECK(c.imag_points(0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(c.imag_points(1) == doctest::Approx(0.2).epsilon(1e-14));
  }
}

TEST_CASE("anti-Hermitian eigenvalues: location, symmetry, trace, dense agreement") {
  RngStream rng(4, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = 1 + trial % 4, n = 1 + (trial / 4) % 4;
    const auto J = models::sample_chiral_jacobi(EnsembleParams::make(trial % 3 == 0 ? 0.5 : 2.0, m, n), rng);
    const double l = 0.05 + 5.0 * rng.uniform();
    const auto pj = models::perturb(J, l, Perturbation::AntiHermitian);
    const VectorXc z = nonhermitian_roots(pj);
    CHECK((z.imag().array() > 0.0).all());
    CHECK(std::abs(z.sum() - Complex(0.0, l)) < 1e-9);
    CHECK(matching(z, -z.conjugate()) < 1e-9);
    CHECK(matching(z, dense_eigenvalues(pj.dense())) < 1e-8 * (1.0 + l + J.a.maxCoeff()));
    const auto c = eig_nonhermitian(pj);
    CHECK(c.N() == pj.N());
    CHECK(matching(c.points(), z) < 1e-9);
  }
}

TEST_CASE("classification of raw points") {
  VectorXc pts(4);
  pts << Complex(0.0, 2.0), Complex(1.0, 0.5), Complex(-1.0, 0.5), Complex(1e-12, 0.3);
  const auto c = classify(pts);
  CHECK(c.L() == 2);
  CHECK(c.M() == 1);
  CHECK(c.imag_points(0) == 2.0);
  CHECK(c.imag_points(1) == 0.3);
  CHECK(c.pair_x(0) == 1.0);
  VectorXc lonely(2);
  lonely << Complex(1.0, 0.5), Complex(0.0, 1.0);
  CHECK_THROWS_AS(classify(lonely), InvalidConfiguration);
}

TEST_CASE("spectral measure examples") {
  const auto s2 = spectral_measure(jacobi({1.7}));
  REQUIRE(s2.lambdas.size() == 1);
  CHECK(s2.lambdas(0) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(s2.weights(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(s2.has_w0);

  const auto s3 = spectral_measure(jacobi({1.0, 1.0}));
  REQUIRE(s3.has_w0);
  CHECK(s3.lambdas(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s3.weights(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s3.w0 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("spectral measure moments, symmetry and normalization") {
  RngStream rng(5, 0);
  for (Index N = 2; N <= 12; ++N) {
    const auto J = random_jacobi(N, rng);
    const auto sm = spectral_measure(J);
    CHECK(sm.N() == N);
    CHECK(std::abs(sm.total_weight() - 1.0) < 1e-12);
    CHECK(sm.moment(2) == doctest::Approx(J.a(0) * J.a(0)).epsilon(1e-12));
    MatrixXd P = MatrixXd::Identity(N, N);
    const MatrixXd A = J.dense();
    for (int k = 0; k <= 6; ++k) {
      CHECK(std::abs(sm.moment(k) - P(0, 0)) < 1e-10 * std::max(1.0, std::abs(P(0, 0))));
      P = P * A;
    }
    // Unperturbed spectrum is symmetric; odd N has a zero eigenvalue.
    const auto te = symmetric_tridiagonal_eigen(VectorXd::Zero(N), J.a);
    CHECK(matching(te.values.cast<Complex>(), -te.values.cast<Complex>()) < 1e-10);
    if (N % 2 == 1) CHECK(te.values.cwiseAbs().minCoeff() < 1e-10);
  }
}

TEST_CASE("Lanczos reconstruction") {
  SpectralMeasure one;
  one.lambdas = VectorXd::Constant(1, 2.5);
  one.weights = VectorXd::Ones(1);
  CHECK(reconstruct_jacobi(one).a(0) == doctest::Approx(2.5).epsilon(1e-15));

  SpectralMeasure three;
  three.lambdas = VectorXd::Constant(1, std::sqrt(2.0));
  three.weights = VectorXd::Constant(1, 0.5);
  three.w0 = 0.5;
  three.has_w0 = true;
  const auto J3 = reconstruct_jacobi(three);
  REQUIRE(J3.N() == 3);
  CHECK(J3.a(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(J3.a(1) == doctest::Approx(1.0).epsilon(1e-14));

  RngStream rng(6, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index N = 2 + trial % 19;
    const auto J = random_jacobi(N, rng);
    const auto back = reconstruct_jacobi(spectral_measure(J));
    CHECK((back.a - J.a).cwiseAbs().maxCoeff() / J.a.cwiseAbs().maxCoeff() < 1e-8);
  }

  SpectralMeasure bad = one;
  bad.weights(0) = 0.5;
  CHECK_THROWS_AS(reconstruct_jacobi(bad), ParameterError);
}

TEST_CASE("inverse maps from eigenvalue configurations") {
  SUBCASE("Hermitian two by two") {
    HermitianConfig c;
    c.z = Eigen::Vector2d(1.0 + std::sqrt(2.0), 1.0 - std::sqrt(2.0));
    const auto pj = reconstruct_perturbed(c);
    CHECK(pj.l == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(pj.base.a(0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("anti-Hermitian two imaginary points") {
    ComplexConfig c;
    c.imag_points = Eigen::Vector2d(0.8, 0.2);
    c.pair_x.resize(0);
    c.pair_y.resize(0);
    const auto pj = reconstruct_perturbed(c);
    CHECK(pj.kind == Perturbation::AntiHermitian);
    CHECK(pj.l == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pj.base.a(0) == doctest::Approx(0.4).epsilon(1e-13));
  }
  SUBCASE("invalid inputs") {
    HermitianConfig nonalt;
    nonalt.z = Eigen::Vector3d(3.0, 2.0, -1.0);
    CHECK_THROWS_AS(reconstruct_perturbed(nonalt), InvalidConfiguration);
    ComplexConfig below;
    below.imag_points = Eigen::Vector2d(0.8, -0.2);
    CHECK_THROWS_AS(reconstruct_perturbed(below), InvalidConfiguration);
    ComplexConfig twice;
    twice.imag_points = Eigen::Vector2d(0.5, 0.5);
    CHECK_THROWS_AS(reconstruct_perturbed(twice), DegenerateInput);
  }
}

TEST_CASE("round trips between matrices and configurations") {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index N = 2 + trial % 11;
    const auto J = random_jacobi(N, rng);
    const double l = 0.1 + 4.0 * rng.uniform();
    CAPTURE(N);
    {
      const auto pj = models::perturb(J, l, Perturbation::Hermitian);
      const auto cfg = eig_hermitian(pj).config;
      const auto back = reconstruct_perturbed(cfg);
      CHECK(std::abs(back.l - l) < 1e-7);
      CHECK((back.base.a - J.a).cwiseAbs().maxCoeff() < 1e-7);
      CHECK((eig_hermitian(back).config.z - cfg.z).cwiseAbs().maxCoeff() < 1e-7);
    }
    {
      const auto pj = models::perturb(J, l, Perturbation::AntiHermitian);
      const auto cfg = eig_nonhermitian(pj);
      const auto back = reconstruct_perturbed(cfg);
      CHECK(std::abs(back.l - l) < 1e-7);
      CHECK((back.base.a - J.a).cwiseAbs().maxCoeff() < 1e-7);
      CHECK(matching(eig_nonhermitian(back).points(), cfg.points()) < 1e-7);
    }
  }
}

TEST_CASE("spectral data recovered from perturbed eigenvalues matches the eigenvector weights") {
  RngStream rng(8, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index N = 2 + trial % 9;
    const auto J = random_jacobi(N, rng);
    const auto sm = spectral_measure(J);
    const double l = 0.2 + rng.uniform();
    const auto z = eig_hermitian(models::perturb(J, l, Perturbation::Hermitian)).config.z;
    const auto rec = spectral_from_perturbed(z.cast<Complex>(), Complex(l, 0.0));
    CHECK((rec.lambdas - sm.lambdas).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((rec.weights - sm.weights).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(std::abs(rec.w0 - sm.w0) < 1e-7);
  }
}
