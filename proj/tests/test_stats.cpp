#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "chiral/densities.hpp"
#include "chiral/error.hpp"
#include "chiral/models.hpp"
#include "chiral/random.hpp"
#include "chiral/stats.hpp"

using namespace chiral;
using namespace chiral::stats;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::vector<double> normals(std::uint64_t seed, int n, double shift = 0.0) {
  random::RngStream rng(seed, 0);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal() + shift;
  return x;
}

std::vector<double> chi2(std::uint64_t seed, int n) {
  random::RngStream rng(seed, 0);
  std::vector<double> x(n);
  for (auto& v : x) v = random::sample_chi(2.0, rng);
  return x;
}

}  // namespace

TEST_CASE("critical value at alpha = 0.001") {
  CHECK(ks_critical_value(0.001) == doctest::Approx(1.949).epsilon(1e-3));
}

TEST_CASE("two-sample KS") {
  SUBCASE("identical samples") {
    const auto a = normals(1, 500);
    const auto r = ks_two_sample(a, a);
    CHECK(r.D == 0.0);
    CHECK(r.pass);
    CHECK(r.n2 == 500);
  }
  SUBCASE("shifted normals are rejected") {
    const auto r = ks_two_sample(normals(2, 10000), normals(3, 10000, 1.0));
    CHECK_FALSE(r.pass);
    // sup |Phi(x) - Phi(x - 1)| = 2 Phi(1/2) - 1.
    CHECK(std::abs(r.D - (2.0 * normal_cdf(0.5) - 1.0)) < 0.03);
  }
  SUBCASE("same chi law passes") {
    const auto r = ks_two_sample(chi2(4, 100000), chi2(5, 100000));
    CHECK(r.pass);
    CHECK(r.threshold == doctest::Approx(ks_critical_value(0.001) * std::sqrt(2.0 / 100000.0)).epsilon(1e-12));
  }
  SUBCASE("exact statistic on a small case") {
    // a = {1, 2, 3}, b = {2.5}: sup |F_a - F_b| = 2/3 at x in [2, 2.5).
    CHECK(ks_two_sample({3.0, 1.0, 2.0}, {2.5}).D == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    // Ties step together.
    CHECK(ks_two_sample({1.0, 2.0}, {1.0, 2.0, 2.0, 1.0}).D == 0.0);
  }
  SUBCASE("permutation invariance") {
    auto a = normals(6, 300), b = normals(7, 200);
    const double d = ks_two_sample(a, b).D;
    std::reverse(a.begin(), a.end());
    std::rotate(b.begin(), b.begin() + 17, b.end());
    CHECK(ks_two_sample(a, b).D == d);
  }
  SUBCASE("empty input") { CHECK_THROWS_AS(ks_two_sample({}, {1.0}), ParameterError); }
}

TEST_CASE("one-sample KS") {
  SUBCASE("closed-form one-point law") {
    random::RngStream rng(8, 0);
    const auto p = models::EnsembleParams::make(2.0, 1, 1);
    std::vector<double> lam(50000);
    for (auto& v : lam) v = models::sample_chiral_jacobi(p, rng).a(0);
    const auto r = ks_one_sample(lam, [](double x) { return 1.0 - std::exp(-x * x / 2.0); });
    CHECK(r.pass);
    CHECK_FALSE(r.n2.has_value());
    CHECK(r.threshold == doctest::Approx(1.949 / std::sqrt(50000.0)).epsilon(1e-3));
  }
  SUBCASE("shifted samples fail") {
    CHECK_FALSE(ks_one_sample(normals(9, 10000, 0.2), normal_cdf).pass);
  }
  SUBCASE("a single sample") {
    // F(0.3) = 0.3: D = max(0.3, 0.7).
    CHECK(ks_one_sample({0.3}, [](double x) { return std::clamp(x, 0.0, 1.0); }).D == doctest::Approx(0.7).epsilon(1e-15));
  }
  SUBCASE("non-monotone cdf") {
    CHECK_THROWS_AS(ks_one_sample({0.1, 0.2, 0.3}, [](double x) { return x < 0.15 ? 0.5 : 0.2; }), ParameterError);
  }
}

TEST_CASE("one-dimensional quadrature") {
  CHECK(integrate([](double x) { return x * std::exp(-x * x / 2.0); }, 0.0, kInf).value ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate([](double z) { return std::exp(-z * z / 4.0); }, -kInf, kInf).value ==
        doctest::Approx(2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x) / x; }, 1e-8, 1.0, 1e-14, 1e-14, 20), AccuracyError);
}

TEST_CASE("nested quadrature") {
  SUBCASE("product integrands factor") {
    const double one = integrate([](double x) { return std::exp(-x) * (1.0 + x * x); }, 0.0, kInf).value;
    const double two = integrate([](double y) { return std::exp(-y * y); }, -kInf, kInf).value;
    const double prod = quad_nd([](const std::vector<double>& x) { return -x[0] + std::log1p(x[0] * x[0]) - x[1] * x[1]; },
                                {fixed_bounds(0.0, kInf), fixed_bounds(-kInf, kInf)}, 1e-11);
    CHECK(prod == doctest::Approx(one * two).epsilon(1e-9));
  }
  SUBCASE("dependent bounds: area of the unit simplex") {
    const double v = quad_nd([](const std::vector<double>&) { return 0.0; },
                             {fixed_bounds(0.0, 1.0), [](const std::vector<double>& o) { return std::make_pair(0.0, 1.0 - o[0]); },
                              [](const std::vector<double>& o) { return std::make_pair(0.0, 1.0 - o[0] - o[1]); }},
                             1e-10);
    CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  }
  SUBCASE("two-point spectral density over the ordered chamber") {
    // beta = 2, m = 2, n = 2: integrate out the weight first, then 0 < lambda_2 < lambda_1.
    const auto p = models::EnsembleParams::make(2.0, 2, 2);
    const double v = quad_nd(
        [&](const std::vector<double>& x) {
          return densities::spectral_logdensity(p, Eigen::Vector2d(x[0], x[1]), Eigen::Vector2d(x[2], 1.0 - x[2]));
        },
        {fixed_bounds(0.0, kInf), [](const std::vector<double>& o) { return std::make_pair(0.0, o[0]); },
         fixed_bounds(0.0, 1.0)},
        1e-8);
    CHECK(v == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("too many axes") {
    CHECK_THROWS_AS(quad_nd([](const std::vector<double>&) { return 0.0; },
                            {fixed_bounds(0, 1), fixed_bounds(0, 1), fixed_bounds(0, 1), fixed_bounds(0, 1)}),
                    ParameterError);
  }
}

TEST_CASE("tabulated cdf of an unnormalized density") {
  const TabulatedCdf cdf([](double x) { return 3.0 * x * std::exp(-x * x / 2.0); }, 0.0, kInf);
  CHECK(cdf.mass() == doctest::Approx(3.0).epsilon(1e-10));
  for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) CHECK(cdf(x) == doctest::Approx(1.0 - std::exp(-x * x / 2.0)).epsilon(1e-7));
  CHECK(cdf(-1.0) == 0.0);
}

TEST_CASE("mean estimate") {
  const auto m = mean_estimate({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == 2.5);
  CHECK(m.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-14));
  CHECK(m.n == 4);
}
