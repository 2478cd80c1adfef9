#include "chiral/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "chiral/error.hpp"

namespace chiral::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae (descending) and weights; odd entries belong to the Gauss rule.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {a, b, value, err};
}

QuadResult adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
                    int max_subdivisions) {
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value, error = first.error;
  heap.push(first);
  int subdivisions = 0;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (subdivisions >= max_subdivisions)
      throw AccuracyError("quadrature subdivision budget exhausted", total, error);
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval can no longer be split; accept its contribution.
      error -= worst.error;
      if (heap.empty()) break;
      continue;
    }
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed accumulated cancellation in the running total.
  double sum = 0.0, err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, subdivisions};
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

double ks_critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

KsReport ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
  if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: samples must be nonempty");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double D = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    D = std::max(D, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsReport r;
  r.D = D;
  r.n1 = static_cast<Index>(a.size());
  r.n2 = static_cast<Index>(b.size());
  r.threshold = ks_critical_value(alpha) * std::sqrt((n1 + n2) / (n1 * n2));
  r.pass = D < r.threshold;
  return r;
}

KsReport ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf, double alpha) {
  if (a.empty()) throw ParameterError("ks_one_sample: sample must be nonempty");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double D = 0.0, prev = -kInf;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double F = cdf(a[i]);
    if (!(F >= -1e-12 && F <= 1.0 + 1e-12)) throw ParameterError("ks_one_sample: cdf left [0, 1]");
    if (F < prev - 1e-12) throw ParameterError("ks_one_sample: cdf is not monotone on the sample");
    prev = F;
    D = std::max({D, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  KsReport r;
  r.D = D;
  r.n1 = static_cast<Index>(a.size());
  r.threshold = ks_critical_value(alpha) / std::sqrt(n);
  r.pass = D < r.threshold;
  return r;
}

MeanEstimate mean_estimate(const std::vector<double>& x) {
  if (x.size() < 2) throw ParameterError("mean_estimate: need at least two values");
  MeanEstimate m;
  m.n = static_cast<Index>(x.size());
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : x) {
    ++k;
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  m.mean = mean;
  m.stderr_ = std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k));
  return m;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
                     int max_subdivisions) {
  if (std::isnan(a) || std::isnan(b)) throw ParameterError("integrate: NaN bound");
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, abs_tol, rel_tol, max_subdivisions);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return adaptive(f, a, b, abs_tol, rel_tol, max_subdivisions);
  if (lo_inf && hi_inf) {
    auto g = [&](double t) {
      const double d = 1.0 - t * t;
      return finite_or_zero(f(t / d) * (1.0 + t * t) / (d * d));
    };
    return adaptive(g, -1.0, 1.0, abs_tol, rel_tol, max_subdivisions);
  }
  if (hi_inf) {
    auto g = [&](double t) {
      const double d = 1.0 - t;
      return finite_or_zero(f(a + t / d) / (d * d));
    };
    return adaptive(g, 0.0, 1.0, abs_tol, rel_tol, max_subdivisions);
  }
  auto g = [&](double t) {
    const double d = 1.0 - t;
    return finite_or_zero(f(b - t / d) / (d * d));
  };
  return adaptive(g, 0.0, 1.0, abs_tol, rel_tol, max_subdivisions);
}

AxisBounds fixed_bounds(double lo, double hi) {
  return [lo, hi](const std::vector<double>&) { return std::make_pair(lo, hi); };
}

namespace {

double nested(const LogIntegrand& log_f, const std::vector<AxisBounds>& axes, std::vector<double>& x, std::size_t k,
              double tol) {
  const std::vector<double> outer(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
  const auto [lo, hi] = axes[k](outer);
  if (!(hi > lo)) return 0.0;
  auto g = [&](double t) {
    x[k] = t;
    if (k + 1 == axes.size()) {
      const double v = std::exp(log_f(x));
      return std::isfinite(v) ? v : 0.0;
    }
    // Inner levels run tighter so their noise stays below the outer tolerance.
    return nested(log_f, axes, x, k + 1, 0.1 * tol);
  };
  return integrate(g, lo, hi, 1e-300, tol).value;
}

}  // namespace

double quad_nd(const LogIntegrand& log_f, const std::vector<AxisBounds>& axes, double tol) {
  if (axes.empty() || axes.size() > 3) throw ParameterError("quad_nd: dimension must be 1, 2 or 3");
  std::vector<double> x(axes.size(), 0.0);
  return nested(log_f, axes, x, 0, tol);
}

TabulatedCdf::TabulatedCdf(const std::function<double(double)>& density, double lo, double hi, int knots,
                           double rel_tol) {
  if (!(hi > lo) || knots < 2) throw ParameterError("TabulatedCdf: need lo < hi and at least two knots");
  const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
  auto map = [&](double t) {
    if (lo_inf && hi_inf) return t / (1.0 - t * t);
    if (hi_inf) return lo + t / (1.0 - t);
    if (lo_inf) return hi - (1.0 - t) / t;
    return lo + t * (hi - lo);
  };
  const double t0 = lo_inf && hi_inf ? -1.0 : 0.0;
  const double span = 1.0 - t0;
  // Interior knots only when an end is infinite; the tails are folded into the end pieces.
  for (int k = 0; k <= knots; ++k) {
    const double t = t0 + span * static_cast<double>(k) / knots;
    if ((k == 0 && lo_inf) || (k == knots && hi_inf)) continue;
    x_.push_back(k == 0 ? lo : (k == knots ? hi : map(t)));
  }
  f_.resize(x_.size());
  for (std::size_t k = 0; k < x_.size(); ++k) f_[k] = finite_or_zero(density(x_[k]));

  const double head = lo_inf ? integrate(density, -kInf, x_.front(), 1e-300, rel_tol).value : 0.0;
  F_.assign(x_.size(), head);
  for (std::size_t k = 1; k < x_.size(); ++k)
    F_[k] = F_[k - 1] + integrate(density, x_[k - 1], x_[k], 1e-300, rel_tol).value;
  const double tail = hi_inf ? integrate(density, x_.back(), kInf, 1e-300, rel_tol).value : 0.0;
  mass_ = F_.back() + tail;
  if (!(mass_ > 0.0)) throw NumericalFailure("TabulatedCdf: density has no mass");
  for (auto& v : F_) v /= mass_;
  for (auto& v : f_) v /= mass_;
}

double TabulatedCdf::operator()(double x) const {
  if (x <= x_.front()) return F_.front();
  if (x >= x_.back()) return x == x_.back() ? F_.back() : 1.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * F_[k] + (t3 - 2 * t2 + t) * h * f_[k] + (-2 * t3 + 3 * t2) * F_[k + 1] +
                   (t3 - t2) * h * f_[k + 1];
  return std::clamp(v, F_[k], F_[k + 1]);
}

}  // namespace chiral::stats
