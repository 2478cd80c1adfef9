#include "chiral/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "chiral/error.hpp"

namespace chiral::eig {

using models::Perturbation;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

// ---------------------------------------------------------------------------
// Basic types

double SpectralMeasure::moment(int k) const {
  if (k == 0) return total_weight();
  if (k % 2 == 1) return 0.0;
  double acc = 0.0;
  for (Index j = 0; j < lambdas.size(); ++j) acc += weights(j) * std::pow(lambdas(j), k);
  return acc;
}

VectorXc ComplexConfig::points() const {
  VectorXc out(N());
  Index k = 0;
  for (Index j = 0; j < L(); ++j) out(k++) = Complex(0.0, imag_points(j));
  for (Index j = 0; j < M(); ++j) {
    out(k++) = Complex(pair_x(j), pair_y(j));
    out(k++) = Complex(-pair_x(j), pair_y(j));
  }
  return out;
}

Complex CharPoly::operator()(Complex z) const {
  Complex acc = 0.0;
  for (Index j = kappa.size() - 1; j >= 0; --j) acc = acc * z + kappa(j);
  return acc;
}

template <typename Scalar>
Vector<Scalar> tridiagonal_charpoly(const VectorXd& a, Scalar coupling) {
  const Index N = a.size() + 1;
  Vector<Scalar> prev = Vector<Scalar>::Zero(N + 1);  // p_{k-2}
  Vector<Scalar> cur = Vector<Scalar>::Zero(N + 1);   // p_{k-1}
  prev(0) = Scalar(1);
  cur(0) = -coupling;
  cur(1) = Scalar(1);
  for (Index k = 2; k <= N; ++k) {
    const double a2 = a(k - 2) * a(k - 2);
    Vector<Scalar> next = Vector<Scalar>::Zero(N + 1);
    for (Index j = 1; j <= k; ++j) next(j) = cur(j - 1);
    next -= a2 * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

template VectorXd tridiagonal_charpoly<double>(const VectorXd&, double);
template VectorXc tridiagonal_charpoly<Complex>(const VectorXd&, Complex);

CharPoly char_poly(const PerturbedJacobi& pj) {
  if (pj.kind == Perturbation::Hermitian) return {tridiagonal_charpoly<double>(pj.base.a, pj.l).cast<Complex>()};
  return {tridiagonal_charpoly<Complex>(pj.base.a, pj.coupling())};
}

// ---------------------------------------------------------------------------
// Symmetric tridiagonal QL

TridiagonalEigen symmetric_tridiagonal_eigen(const VectorXd& diag, const VectorXd& offdiag) {
  const Index n = diag.size();
  if (offdiag.size() + 1 != n) throw ParameterError("tridiagonal: offdiag must have size n - 1");
  VectorXd d = diag;
  VectorXd e = VectorXd::Zero(n);
  e.head(n - 1) = offdiag;
  MatrixXd z = MatrixXd::Identity(n, n);

  const long budget = 50 * static_cast<long>(n);
  long iterations = 0;
  for (Index l = 0; l < n; ++l) {
    Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= kEps * dd) break;
      }
      if (m == l) break;
      if (++iterations > budget) throw NumericalFailure("QL iteration did not converge");

      // Wilkinson shift from the leading 2x2 block.
      double g = (d(l + 1) - d(l)) / (2.0 * e(l));
      double r = std::hypot(g, 1.0);
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      Index i;
      bool underflow = false;
      for (i = m - 1; i >= l; --i) {
        double f = s * e(i);
        const double b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == 0.0) {
          d(i + 1) -= p;
          e(m) = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + 2.0 * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
        for (Index k = 0; k < n; ++k) {
          f = z(k, i + 1);
          z(k, i + 1) = s * z(k, i) + c * f;
          z(k, i) = c * z(k, i) - s * f;
        }
      }
      if (underflow) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0.0;
    } while (m != l);
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index x, Index y) { return d(x) < d(y); });
  TridiagonalEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = d(order[k]);
    out.vectors.col(k) = z.col(order[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian perturbation

VectorXd sort_by_modulus(const VectorXd& z) {
  std::vector<double> v(z.data(), z.data() + z.size());
  std::sort(v.begin(), v.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
  return Eigen::Map<VectorXd>(v.data(), static_cast<Index>(v.size()));
}

bool is_sign_alternating(const VectorXd& z, bool allow_ties) {
  if (z.size() == 0) return false;
  for (Index j = 0; j < z.size(); ++j) {
    const double signed_mod = (j % 2 == 0) ? z(j) : -z(j);
    if (!(signed_mod > 0.0)) return false;
    if (j > 0) {
      const double prev = (j % 2 == 1) ? z(j - 1) : -z(j - 1);
      if (!(prev > signed_mod || (allow_ties && prev == signed_mod))) return false;
    }
  }
  return true;
}

HermitianEig eig_hermitian(const PerturbedJacobi& pj) {
  if (pj.kind != Perturbation::Hermitian) throw ParameterError("eig_hermitian needs a Hermitian perturbation");
  if (!(pj.l > 0.0)) throw ParameterError("eig_hermitian: l must be positive");
  const Index N = pj.N();
  VectorXd diag = VectorXd::Zero(N);
  diag(0) = pj.l;
  const auto te = symmetric_tridiagonal_eigen(diag, pj.base.a);

  std::vector<Index> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index x, Index y) { return std::abs(te.values(x)) > std::abs(te.values(y)); });
  HermitianEig out;
  out.config.z.resize(N);
  out.first_components.resize(N);
  for (Index k = 0; k < N; ++k) {
    out.config.z(k) = te.values(order[k]);
    out.first_components(k) = te.vectors(0, order[k]);
  }
  // A tiny coupling splits a +-pair below the absolute accuracy of the eigenvalues; such a
  // pair is put in alternating order and given a common modulus.
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() *
                     (pj.l + 2.0 * (N > 1 ? pj.base.a.cwiseAbs().maxCoeff() : 0.0));
  auto& z = out.config.z;
  for (Index k = 0; k + 1 < N; ++k) {
    if (std::abs(z(k)) - std::abs(z(k + 1)) > tol || (z(k) > 0.0) == (z(k + 1) > 0.0)) continue;
    const bool want_positive = k % 2 == 0;
    if ((z(k) > 0.0) != want_positive) {
      std::swap(z(k), z(k + 1));
      std::swap(out.first_components(k), out.first_components(k + 1));
    }
    if (std::abs(z(k)) < std::abs(z(k + 1))) {
      const double mod = 0.5 * (std::abs(z(k)) + std::abs(z(k + 1)));
      z(k) = std::copysign(mod, z(k));
      z(k + 1) = std::copysign(mod, z(k + 1));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Anti-Hermitian perturbation

namespace {

// Q(w) = i^N kappa(w / i) satisfies q_k = (w + l [k == 1]) q_{k-1} + a_{k-1}^2 q_{k-2}.
// Returns Q'(w) / Q(w) via the ratio recurrence, which never forms Q itself.
Complex q_log_derivative(const VectorXd& a, double l, Complex w) {
  const double tiny = std::numeric_limits<double>::min() * 1e4;
  Complex r = w + l;  // q_1 / q_0
  if (r == 0.0) r = tiny;
  Complex s_prev2 = 0.0;        // s_0
  Complex s_prev = 1.0 / r;     // s_1
  Complex r_prev = r;
  for (Index k = 0; k < a.size(); ++k) {
    const double a2 = a(k) * a(k);
    Complex rk = w + a2 / r_prev;
    if (rk == 0.0) rk = tiny;
    const Complex sk = (1.0 + w * s_prev + a2 * s_prev2 / r_prev) / rk;
    s_prev2 = s_prev;
    s_prev = sk;
    r_prev = rk;
  }
  return s_prev;
}

VectorXc fallback_roots(const VectorXd& a, double l) {
  const Index N = a.size() + 1;
  MatrixXd T = MatrixXd::Zero(N, N);
  T(0, 0) = -l;
  for (Index k = 0; k + 1 < N; ++k) {
    T(k, k + 1) = a(k);
    T(k + 1, k) = -a(k);
  }
  Eigen::EigenSolver<MatrixXd> solver(T, false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("root finder and fallback eigensolver both failed");
  return solver.eigenvalues();
}

}  // namespace

VectorXc nonhermitian_roots(const PerturbedJacobi& pj) {
  if (pj.kind != Perturbation::AntiHermitian) throw ParameterError("nonhermitian_roots needs an anti-Hermitian perturbation");
  if (!(pj.l > 0.0)) throw ParameterError("nonhermitian_roots: l must be positive");
  const VectorXd& a = pj.base.a;
  const double l = pj.l;
  const Index N = pj.N();

  const double bound = l + 2.0 * max_abs(a);
  const double scale = std::max(bound, 1e-300);
  VectorXc w(N);
  for (Index k = 0; k < N; ++k) {
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(N) + 0.4;
    w(k) = 0.7 * scale * Complex(std::cos(theta), std::sin(theta));
  }

  bool converged = false;
  std::vector<bool> done(static_cast<std::size_t>(N), false);
  for (int iter = 0; iter < 500 && !converged; ++iter) {
    converged = true;
    for (Index k = 0; k < N; ++k) {
      if (done[k]) continue;
      const Complex ratio = 1.0 / q_log_derivative(a, l, w(k));
      Complex repulsion = 0.0;
      for (Index j = 0; j < N; ++j)
        if (j != k) repulsion += 1.0 / (w(k) - w(j));
      const Complex corr = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) {
        converged = false;
        continue;
      }
      w(k) -= corr;
      if (std::abs(corr) <= 1e-13 * scale) {
        done[k] = true;
      } else {
        converged = false;
      }
    }
  }
  if (!converged) w = fallback_roots(a, l);

  // Roots of Q are i z.
  VectorXc z(N);
  for (Index k = 0; k < N; ++k) z(k) = Complex(w(k).imag(), -w(k).real());
  return z;
}

ComplexConfig classify(const VectorXc& points, double tol) {
  ComplexConfig out;
  out.classification_tol = tol;
  std::vector<double> imag;
  std::vector<Complex> right, left;
  for (Index k = 0; k < points.size(); ++k) {
    const Complex z = points(k);
    if (!(z.imag() > 0.0)) throw InvalidConfiguration("point outside the open upper half plane");
    const double band = tol * (1.0 + std::abs(z));
    const double re = std::abs(z.real());
    if (re > 0.1 * band && re < 10.0 * band) out.ambiguous = true;
    if (re <= band) {
      imag.push_back(z.imag());
    } else if (z.real() > 0.0) {
      right.push_back(z);
    } else {
      left.push_back(z);
    }
  }
  if (right.size() != left.size()) throw InvalidConfiguration("points are not symmetric about the imaginary axis");

  std::sort(imag.begin(), imag.end(), std::greater<>());
  out.imag_points = Eigen::Map<VectorXd>(imag.data(), static_cast<Index>(imag.size()));

  std::sort(right.begin(), right.end(), [](Complex x, Complex y) { return x.real() > y.real(); });
  out.pair_x.resize(static_cast<Index>(right.size()));
  out.pair_y.resize(static_cast<Index>(right.size()));
  for (std::size_t j = 0; j < right.size(); ++j) {
    const Complex mirror = -std::conj(right[j]);
    auto best = std::min_element(left.begin(), left.end(), [&](Complex x, Complex y) {
      return std::abs(x - mirror) < std::abs(y - mirror);
    });
    if (std::abs(*best - mirror) > 1e-6 * (1.0 + std::abs(mirror)))
      throw InvalidConfiguration("mirror partner missing");
    out.pair_x(static_cast<Index>(j)) = 0.5 * (right[j].real() - best->real());
    out.pair_y(static_cast<Index>(j)) = 0.5 * (right[j].imag() + best->imag());
    left.erase(best);
  }
  return out;
}

ComplexConfig eig_nonhermitian(const PerturbedJacobi& pj) { return classify(nonhermitian_roots(pj)); }

// ---------------------------------------------------------------------------
// Spectral measure and its inverse

SpectralMeasure spectral_measure(const JacobiMatrix& J) {
  const Index N = J.N();
  if (N < 2) throw ParameterError("spectral_measure: N must be >= 2");
  if ((J.a.array() <= 0.0).any()) throw ParameterError("spectral_measure: off-diagonal entries must be positive");
  const auto te = symmetric_tridiagonal_eigen(VectorXd::Zero(N), J.a);
  const Index s = N / 2;
  const double tol = 1e-8 * std::max(1.0, te.values(N - 1));

  SpectralMeasure sm;
  sm.lambdas.resize(s);
  sm.weights.resize(s);
  for (Index k = 0; k < s; ++k) {
    const double neg = te.values(k);
    const double pos = te.values(N - 1 - k);
    if (std::abs(pos + neg) > tol || !(pos > 0.0))
      throw NumericalFailure("spectrum of a zero-diagonal Jacobi matrix is not symmetric");
    sm.lambdas(k) = 0.5 * (pos - neg);
    sm.weights(k) = te.vectors(0, k) * te.vectors(0, k) + te.vectors(0, N - 1 - k) * te.vectors(0, N - 1 - k);
  }
  if (N % 2 == 1) {
    if (std::abs(te.values(s)) > tol) throw NumericalFailure("odd Jacobi matrix without a zero eigenvalue");
    sm.has_w0 = true;
    sm.w0 = te.vectors(0, s) * te.vectors(0, s);
  }
  return sm;
}

namespace {

void validate_measure(const SpectralMeasure& sm) {
  const Index s = sm.lambdas.size();
  if (s < 1 || sm.weights.size() != s) throw ParameterError("spectral measure needs matching, nonempty lambdas and weights");
  for (Index j = 0; j < s; ++j) {
    if (!(sm.lambdas(j) > 0.0) || !(sm.weights(j) > 0.0)) throw ParameterError("lambdas and weights must be positive");
    if (j > 0 && !(sm.lambdas(j) < sm.lambdas(j - 1))) throw ParameterError("lambdas must be strictly decreasing");
  }
  if (sm.has_w0 && !(sm.w0 > 0.0)) throw ParameterError("w0 must be positive");
  if (std::abs(sm.total_weight() - 1.0) > 1e-8) throw ParameterError("spectral weights must sum to 1");
}

}  // namespace

JacobiMatrix reconstruct_jacobi(const SpectralMeasure& sm) {
  validate_measure(sm);
  const Index s = sm.lambdas.size();
  const Index N = sm.N();
  VectorXd nodes(N), mass(N);
  for (Index j = 0; j < s; ++j) {
    nodes(2 * j) = sm.lambdas(j);
    nodes(2 * j + 1) = -sm.lambdas(j);
    mass(2 * j) = mass(2 * j + 1) = 0.5 * sm.weights(j);
  }
  if (sm.has_w0) {
    nodes(N - 1) = 0.0;
    mass(N - 1) = sm.w0;
  }
  mass /= sm.total_weight();

  const double scale = sm.lambdas(0);
  MatrixXd Q = MatrixXd::Zero(N, N);
  Q.col(0) = mass.cwiseSqrt();
  JacobiMatrix J;
  J.a.resize(N - 1);
  double beta_prev = 0.0;
  for (Index k = 0; k + 1 < N; ++k) {
    VectorXd r = nodes.cwiseProduct(Q.col(k));
    const double alpha = Q.col(k).dot(r);
    if (std::abs(alpha) > 1e-9 * scale) throw NumericalFailure("Lanczos diagonal coefficient does not vanish");
    r -= alpha * Q.col(k);
    if (k > 0) r -= beta_prev * Q.col(k - 1);
    for (int pass = 0; pass < 2; ++pass) r -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * r);
    const double beta = r.norm();
    if (!(beta > 1e-14 * scale)) throw NumericalFailure("ill-conditioned measure: Lanczos norm collapsed");
    J.a(k) = beta;
    Q.col(k + 1) = r / beta;
    beta_prev = beta;
  }
  return J;
}

namespace {

// p(x) for real coefficients (low-to-high) and its derivative.
std::pair<double, double> horner(const std::vector<double>& c, double x) {
  double p = 0.0, dp = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * x + p;
    p = p * x + *it;
  }
  return {p, dp};
}

// Single root of c in (lo, hi) given a sign change: bisection safeguarding Newton.
double bracketed_root(const std::vector<double>& c, double lo, double hi) {
  double flo = horner(c, lo).first;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const auto [p, dp] = horner(c, x);
    if (p == 0.0) return x;
    if ((p > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = p;
    } else {
      hi = x;
    }
    double next = dp != 0.0 ? x - p / dp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * kEps * std::abs(x) || hi - lo <= 4.0 * kEps * std::abs(hi)) return next;
    x = next;
  }
  return x;
}

// All roots of a polynomial known to have only simple positive real roots.
// Roots of c^(k) interlace those of c^(k-1); start from the linear derivative.
std::vector<double> positive_real_roots(const std::vector<double>& c) {
  const std::size_t deg = c.size() - 1;
  if (deg == 0) return {};
  double bound = 0.0;
  for (std::size_t j = 0; j < deg; ++j) bound = std::max(bound, std::abs(c[j] / c[deg]));
  bound += 1.0;

  // derivs[k] = k-th derivative coefficients.
  std::vector<std::vector<double>> derivs{c};
  for (std::size_t k = 1; k < deg; ++k) {
    const auto& prev = derivs.back();
    std::vector<double> d(prev.size() - 1);
    for (std::size_t j = 1; j < prev.size(); ++j) d[j - 1] = prev[j] * static_cast<double>(j);
    derivs.push_back(std::move(d));
  }
  std::vector<double> roots{-derivs.back()[0] / derivs.back()[1]};
  for (std::size_t k = deg - 1; k-- > 0;) {
    const auto& poly = derivs[k];
    std::vector<double> edges{0.0};
    edges.insert(edges.end(), roots.begin(), roots.end());
    edges.push_back(bound);
    std::vector<double> next;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double lo = edges[e], hi = edges[e + 1];
      const double flo = horner(poly, lo).first, fhi = horner(poly, hi).first;
      if (flo == 0.0 && lo > 0.0) {
        next.push_back(lo);
      } else if ((flo > 0.0) != (fhi > 0.0)) {
        next.push_back(bracketed_root(poly, lo, hi));
      }
    }
    if (next.size() != poly.size() - 1) throw InvalidConfiguration("even part of the characteristic polynomial is not real-rooted on (0, inf)");
    roots = std::move(next);
  }
  return roots;
}

// kappa(x) = prod (x - z_k) and its logarithmic derivative.
Complex kappa_at(const VectorXc& z, Complex x) {
  Complex p = 1.0;
  for (Index k = 0; k < z.size(); ++k) p *= x - z(k);
  return p;
}

// Parity-N part of kappa on the real axis: E(x) = Re (kappa(x) + kappa(-x)(-1)^N) / 2.
double even_part(const VectorXc& z, double x) {
  Complex minus = 1.0, plus = 1.0;
  for (Index k = 0; k < z.size(); ++k) {
    minus *= x - z(k);
    plus *= x + z(k);
  }
  return 0.5 * (minus + plus).real();
}

double polish(const VectorXc& z, double x0) {
  double x = x0;
  double fx = even_part(z, x);
  for (int it = 0; it < 4; ++it) {
    const double h = 1e-7 * std::max(std::abs(x), 1e-3);
    const double d = (even_part(z, x + h) - even_part(z, x - h)) / (2.0 * h);
    if (d == 0.0) break;
    const double cand = x - fx / d;
    const double fc = even_part(z, cand);
    if (!(std::abs(fc) < std::abs(fx))) break;
    x = cand;
    fx = fc;
  }
  return x;
}

}  // namespace

SpectralMeasure spectral_from_perturbed(const VectorXc& z, Complex coupling) {
  const Index N = z.size();
  if (N < 2) throw InvalidConfiguration("need at least two points");
  const Index s = N / 2;
  const bool odd = N % 2 == 1;

  // Coefficients of kappa; the parity-N part is prod (u - lambda_j^2) in u = z^2.
  VectorXc kappa = VectorXc::Zero(N + 1);
  kappa(0) = 1.0;
  for (Index k = 0; k < N; ++k) {
    for (Index j = k + 1; j >= 1; --j) kappa(j) = kappa(j - 1) - z(k) * kappa(j);
    kappa(0) = -z(k) * kappa(0);
  }
  std::vector<double> c(static_cast<std::size_t>(s + 1));
  for (Index j = 0; j <= s; ++j) c[j] = kappa(2 * j + (odd ? 1 : 0)).real();

  std::vector<double> u = positive_real_roots(c);
  std::sort(u.begin(), u.end(), std::greater<>());
  VectorXd lambdas(s);
  for (Index j = 0; j < s; ++j) lambdas(j) = polish(z, std::sqrt(u[j]));
  for (Index j = 1; j < s; ++j)
    if (!(lambdas(j) < lambdas(j - 1))) throw DegenerateInput("coincident spectral points");

  // Residues of m(z) = (kappa / E - 1) / coupling: weight(nu) = -kappa(nu) / (coupling E'(nu)).
  SpectralMeasure sm;
  sm.lambdas = lambdas;
  sm.weights.resize(s);
  // Weights are probability masses, so the spurious imaginary part is bounded absolutely.
  auto check = [](Complex w) {
    if (!(w.real() > 0.0) || std::abs(w.imag()) > 1e-6)
      throw Inconsistency("recovered spectral weight is not positive");
    return w.real();
  };
  for (Index j = 0; j < s; ++j) {
    const double lj = lambdas(j);
    double dE = 2.0 * (odd ? lj * lj : lj);
    for (Index k = 0; k < s; ++k)
      if (k != j) dE *= lj * lj - lambdas(k) * lambdas(k);
    sm.weights(j) = check(-2.0 * kappa_at(z, lj) / (coupling * dE));
  }
  if (odd) {
    double dE = 1.0;
    for (Index k = 0; k < s; ++k) dE *= -lambdas(k) * lambdas(k);
    sm.has_w0 = true;
    sm.w0 = check(-kappa_at(z, 0.0) / (coupling * dE));
  }
  const double total = sm.total_weight();
  if (std::abs(total - 1.0) > 1e-6) throw Inconsistency("recovered spectral weights do not sum to 1");
  sm.weights /= total;
  sm.w0 /= total;
  return sm;
}

PerturbedJacobi reconstruct_perturbed(const HermitianConfig& config) {
  if (config.z.size() < 2) throw InvalidConfiguration("need at least two eigenvalues");
  if (!is_sign_alternating(config.z)) throw InvalidConfiguration("eigenvalues are not sign-alternating");
  const double l = config.z.sum();
  if (!(l > 0.0)) throw InvalidConfiguration("eigenvalue sum must be positive");
  const SpectralMeasure sm = spectral_from_perturbed(config.z.cast<Complex>(), Complex(l, 0.0));
  return models::perturb(reconstruct_jacobi(sm), l, Perturbation::Hermitian);
}

PerturbedJacobi reconstruct_perturbed(const ComplexConfig& config) {
  if (config.N() < 2) throw InvalidConfiguration("need at least two eigenvalues");
  if ((config.imag_points.array() <= 0.0).any() || (config.pair_x.array() <= 0.0).any() ||
      (config.pair_y.array() <= 0.0).any())
    throw InvalidConfiguration("configuration leaves the open upper half plane");
  const VectorXc pts = config.points();
  for (Index i = 0; i < pts.size(); ++i)
    for (Index j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts(i) - pts(j)) <= 1e-12 * (1.0 + std::abs(pts(i))))
        throw DegenerateInput("multiple points are not supported by the inverse map");
  const double l = pts.sum().imag();
  const SpectralMeasure sm = spectral_from_perturbed(pts, Complex(0.0, l));
  return models::perturb(reconstruct_jacobi(sm), l, Perturbation::AntiHermitian);
}

}  // namespace chiral::eig
