#include "chiral/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <numeric>

#include "chiral/densities.hpp"
#include "chiral/eig.hpp"
#include "chiral/error.hpp"
#include "chiral/jacobians.hpp"
#include "chiral/models.hpp"
#include "chiral/parallel.hpp"
#include "chiral/random.hpp"
#include "chiral/stats.hpp"

namespace chiral::verify {

using densities::DensityParams;
using eig::ComplexConfig;
using eig::HermitianConfig;
using models::EnsembleParams;
using models::Perturbation;
using random::RngStream;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Kolmogorov critical value at alpha = 0.001, as used by the acceptance thresholds.
constexpr double kKsC = 1.949;

// Stream ids are namespaced per criterion so suites are independent of each other.
std::uint64_t stream_id(int criterion, std::uint64_t sub, std::uint64_t rep) {
  return (static_cast<std::uint64_t>(criterion) << 56) | (sub << 40) | rep;
}

Check hard(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value < threshold, false};
}

Check statistical(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value < threshold, true};
}

Check ks_check(const std::string& name, const stats::KsReport& r, double threshold) {
  return statistical(name + " (n=" + std::to_string(r.n1) + ")", r.D, threshold);
}

double hermitian_largest(const VectorXd& z) { return z.maxCoeff(); }

// max_k min_j |z_j + conj(z_k)|: zero for a configuration symmetric about the imaginary axis.
double mirror_error(const VectorXc& z) {
  double worst = 0.0;
  for (Index k = 0; k < z.size(); ++k) {
    double best = kInf;
    for (Index j = 0; j < z.size(); ++j) best = std::min(best, std::abs(z(j) + std::conj(z(k))));
    worst = std::max(worst, best);
  }
  return worst;
}

struct GridCell {
  double beta;
  Index m, n;
  double l;
};

std::vector<GridCell> location_grid() {
  std::vector<GridCell> grid;
  const std::vector<std::pair<Index, Index>> shapes = {{1, 1}, {1, 3}, {2, 2}, {3, 1}, {3, 5}, {4, 2}, {6, 6}};
  for (double beta : {0.5, 1.0, 2.0, 4.0, 6.0})
    for (const auto& [m, n] : shapes)
      for (double l : {0.05, 1.0, 8.0}) grid.push_back({beta, m, n, l});
  return grid;
}

// ---------------------------------------------------------------------------

CriterionResult c1(const Options& opt) {
  CriterionResult r{1, "dense and Jacobi models share a spectrum (same realization)", {}, 0.0, 30.0};
  const long seeds = opt.reps.value_or(100);
  const std::vector<std::pair<Index, Index>> shapes = {{2, 3}, {3, 2}, {1, 3}, {2, 2}};
  std::uint64_t sub = 0;
  for (double beta : {1.0, 2.0, 4.0})
    for (const auto& [m, n] : shapes)
      for (Perturbation kind : {Perturbation::Hermitian, Perturbation::AntiHermitian}) {
        const auto params = EnsembleParams::make(beta, m, n);
        std::vector<double> worst(static_cast<std::size_t>(seeds), 0.0);
        const std::uint64_t s = sub++;
        parallel_for(seeds, opt.threads, [&](std::int64_t i) {
          RngStream rng(opt.seed, stream_id(1, s, static_cast<std::uint64_t>(i)));
          const double l = 0.5 + 1.5 * rng.uniform();
          const auto d = models::sample_dense(params, kind, l, rng);
          worst[static_cast<std::size_t>(i)] = models::dense_reduction_check(d).max_discrepancy;
        });
        const std::string name = "beta=" + std::to_string(static_cast<int>(beta)) + " m=" + std::to_string(m) +
                                 " n=" + std::to_string(n) + (kind == Perturbation::Hermitian ? " herm" : " antiherm");
        r.checks.push_back(hard(name + " max discrepancy", *std::max_element(worst.begin(), worst.end()), 1e-10));
      }
  return r;
}

CriterionResult c2(const Options& opt) {
  CriterionResult r{2, "dense and Jacobi samplers agree in law (largest eigenvalue)", {}, 0.0, 120.0};
  const long reps = opt.reps.value_or(100000);
  const auto params = EnsembleParams::make(2.0, 2, 3);
  std::vector<double> dense(static_cast<std::size_t>(reps)), jacobi(static_cast<std::size_t>(reps));
  parallel_for(reps, opt.threads, [&](std::int64_t i) {
    RngStream rng(opt.seed, stream_id(2, 0, static_cast<std::uint64_t>(i)));
    const auto d = models::sample_dense(params, Perturbation::Hermitian, 1.0, rng);
    dense[static_cast<std::size_t>(i)] = models::dense_eigenvalues(d).real().maxCoeff();
  });
  parallel_for(reps, opt.threads, [&](std::int64_t i) {
    RngStream rng(opt.seed, stream_id(2, 1, static_cast<std::uint64_t>(i)));
    const auto J = models::sample_chiral_jacobi(params, rng);
    jacobi[static_cast<std::size_t>(i)] =
        hermitian_largest(eig::eig_hermitian(models::perturb(J, 1.0, Perturbation::Hermitian)).config.z);
  });
  const auto ks = stats::ks_two_sample(dense, jacobi);
  const double n = static_cast<double>(reps);
  r.checks.push_back(ks_check("two-sample KS D", ks, kKsC * std::sqrt(2.0 * n / (n * n))));
  return r;
}

CriterionResult c3(const Options& opt) {
  CriterionResult r{3, "spectral measure law", {}, 0.0, 0.0};
  const long reps = opt.reps.value_or(100000);
  {
    const auto params = EnsembleParams::make(2.0, 1, 1);
    std::vector<double> lambda(static_cast<std::size_t>(reps));
    parallel_for(reps, opt.threads, [&](std::int64_t i) {
      RngStream rng(opt.seed, stream_id(3, 0, static_cast<std::uint64_t>(i)));
      lambda[static_cast<std::size_t>(i)] = eig::spectral_measure(models::sample_chiral_jacobi(params, rng)).lambdas(0);
    });
    const auto ks = stats::ks_one_sample(lambda, [](double x) { return x > 0.0 ? -std::expm1(-0.5 * x * x) : 0.0; });
    r.checks.push_back(ks_check("beta=2 m=1 n=1 lambda one-sample KS D", ks, 0.00617));
  }
  {
    const auto params = EnsembleParams::make(2.0, 2, 1);
    std::vector<double> w0(static_cast<std::size_t>(reps));
    parallel_for(reps, opt.threads, [&](std::int64_t i) {
      RngStream rng(opt.seed, stream_id(3, 1, static_cast<std::uint64_t>(i)));
      w0[static_cast<std::size_t>(i)] = eig::spectral_measure(models::sample_chiral_jacobi(params, rng)).w0;
    });
    const auto est = stats::mean_estimate(w0);
    const double expected = (2.0 * (2 - 1) / 2.0) / (2.0 * 2 / 2.0);
    r.checks.push_back(statistical("beta=2 m=2 n=1 |mean(w0) - 1/2| / stderr", std::abs(est.mean - expected) / est.stderr_, 4.0));
  }
  return r;
}

CriterionResult c4(const Options&) {
  CriterionResult r{4, "closed-form densities integrate to one", {}, 0.0, 60.0};
  for (const auto& c : normalization_table()) r.checks.push_back(hard(c.name + " |integral - 1|", std::abs(c.integral - 1.0), c.tolerance));
  return r;
}

CriterionResult c5(const Options& opt) {
  CriterionResult r{5, "Jacobian closed forms match finite differences", {}, 0.0, 10.0};
  const int trials = opt.trials.value_or(100);
  const auto report = jacobians::verify_jacobians(
      opt.jacobian_cases.empty() ? jacobians::full_grid() : opt.jacobian_cases, trials, opt.seed,
      opt.jacobian_step, opt.jacobian_richardson);
  for (const auto& cr : report.cases) {
    const std::string name = std::string(cr.c.parity == jacobians::Parity::Even ? "even" : "odd") +
                             " s=" + std::to_string(cr.c.s) +
                             (cr.c.kind == Perturbation::Hermitian ? " herm" : " antiherm");
    r.checks.push_back(hard(name + " max rel error", cr.max_rel_error, 1e-6));
  }
  return r;
}

CriterionResult c6(const Options& opt) {
  CriterionResult r{6, "eigenvalue locations and the inverse spectral maps", {}, 0.0, 0.0};
  const long reps = opt.reps.value_or(100000);
  const auto grid = location_grid();
  const auto cells = static_cast<std::int64_t>(grid.size());

  // Hermitian locations.
  {
    std::vector<int> bad(static_cast<std::size_t>(reps), 0);
    std::vector<double> trace(static_cast<std::size_t>(reps), 0.0);
    parallel_for(reps, opt.threads, [&](std::int64_t i) {
      const auto& g = grid[static_cast<std::size_t>(i % cells)];
      RngStream rng(opt.seed, stream_id(6, 0, static_cast<std::uint64_t>(i)));
      const auto J = models::sample_chiral_jacobi(EnsembleParams::make(g.beta, g.m, g.n), rng);
      const auto z = eig::eig_hermitian(models::perturb(J, g.l, Perturbation::Hermitian)).config.z;
      bad[static_cast<std::size_t>(i)] = eig::is_sign_alternating(z, true) ? 0 : 1;
      trace[static_cast<std::size_t>(i)] = std::abs(z.sum() - g.l);
    });
    r.checks.push_back(hard("herm alternation violations (exact ties allowed)", std::accumulate(bad.begin(), bad.end(), 0.0), 0.5));
    r.checks.push_back(hard("herm max |sum z - l|", *std::max_element(trace.begin(), trace.end()), 1e-10));
  }
  // Anti-Hermitian locations.
  {
    std::vector<int> below(static_cast<std::size_t>(reps), 0);
    std::vector<double> mirror(static_cast<std::size_t>(reps), 0.0), trace(static_cast<std::size_t>(reps), 0.0);
    parallel_for(reps, opt.threads, [&](std::int64_t i) {
      const auto& g = grid[static_cast<std::size_t>(i % cells)];
      RngStream rng(opt.seed, stream_id(6, 1, static_cast<std::uint64_t>(i)));
      const auto J = models::sample_chiral_jacobi(EnsembleParams::make(g.beta, g.m, g.n), rng);
      const VectorXc z = eig::nonhermitian_roots(models::perturb(J, g.l, Perturbation::AntiHermitian));
      below[static_cast<std::size_t>(i)] = (z.imag().array() <= 0.0).any() ? 1 : 0;
      mirror[static_cast<std::size_t>(i)] = mirror_error(z);
      trace[static_cast<std::size_t>(i)] = std::abs(z.sum() - Complex(0.0, g.l));
    });
    r.checks.push_back(hard("antiherm points with Im z <= 0", std::accumulate(below.begin(), below.end(), 0.0), 0.5));
    r.checks.push_back(hard("antiherm max mirror pairing error", *std::max_element(mirror.begin(), mirror.end()), 1e-9));
    r.checks.push_back(hard("antiherm max |sum z - i l|", *std::max_element(trace.begin(), trace.end()), 1e-9));
  }
  // Round trips over the beta = 1, 2, 4 cells; for beta < 1 the chi entries sit near zero
  // often enough that the inverse map loses more than 1e-7 to conditioning alone.
  std::vector<GridCell> physical;
  std::copy_if(grid.begin(), grid.end(), std::back_inserter(physical),
               [](const GridCell& g) { return g.beta == 1.0 || g.beta == 2.0 || g.beta == 4.0; });
  const auto physical_cells = static_cast<std::int64_t>(physical.size());
  const long trips = std::min<long>(reps, 1000);
  for (Perturbation kind : {Perturbation::Hermitian, Perturbation::AntiHermitian}) {
    std::vector<double> err(static_cast<std::size_t>(trips), 0.0);
    parallel_for(trips, opt.threads, [&](std::int64_t i) {
      const auto& g = physical[static_cast<std::size_t>(i % physical_cells)];
      RngStream rng(opt.seed, stream_id(6, kind == Perturbation::Hermitian ? 2 : 3, static_cast<std::uint64_t>(i)));
      const auto J = models::sample_chiral_jacobi(EnsembleParams::make(g.beta, g.m, g.n), rng);
      const auto pj = models::perturb(J, g.l, kind);
      const auto back = kind == Perturbation::Hermitian ? eig::reconstruct_perturbed(eig::eig_hermitian(pj).config)
                                                        : eig::reconstruct_perturbed(eig::eig_nonhermitian(pj));
      double e = std::abs(back.l - pj.l);
      e = std::max(e, (back.base.a - pj.base.a).cwiseAbs().maxCoeff());
      err[static_cast<std::size_t>(i)] = e;
    });
    r.checks.push_back(hard(std::string(kind == Perturbation::Hermitian ? "herm" : "antiherm") +
                                " round trip max entry error",
                            *std::max_element(err.begin(), err.end()), 1e-7));
  }
  return r;
}

CriterionResult c7(const Options& opt) {
  CriterionResult r{7, "Hermitian-perturbation eigenvalue law", {}, 0.0, 0.0};
  const long reps = opt.reps.value_or(100000);
  const auto params = EnsembleParams::make(2.0, 1, 1);
  {
    const double l = 1.0;
    const auto dp = DensityParams::fixed(params, l);
    const stats::TabulatedCdf cdf(
        [&](double z1) { return std::exp(densities::hermitian_logdensity({Eigen::Vector2d(z1, l - z1)}, dp)); }, l,
        kInf);
    std::vector<double> z1(static_cast<std::size_t>(reps));
    parallel_for(reps, opt.threads, [&](std::int64_t i) {
      RngStream rng(opt.seed, stream_id(7, 0, static_cast<std::uint64_t>(i)));
      const auto J = models::sample_chiral_jacobi(params, rng);
      z1[static_cast<std::size_t>(i)] = eig::eig_hermitian(models::perturb(J, l, Perturbation::Hermitian)).config.z(0);
    });
    r.checks.push_back(ks_check("fixed l=1 z1 one-sample KS D", stats::ks_one_sample(z1, cdf), 0.00617));
  }
  {
    const auto dp = DensityParams::chi(params);
    auto marginal = [&](double z1) {
      return stats::integrate(
                 [&](double z2) { return std::exp(densities::hermitian_logdensity({Eigen::Vector2d(z1, z2)}, dp)); },
                 -z1, 0.0, 1e-300, 1e-11)
          .value;
    };
    const stats::TabulatedCdf cdf(marginal, 0.0, kInf);
    std::vector<double> z1(static_cast<std::size_t>(reps));
    parallel_for(reps, opt.threads, [&](std::int64_t i) {
      RngStream rng(opt.seed, stream_id(7, 1, static_cast<std::uint64_t>(i)));
      const auto J = models::sample_chiral_jacobi(params, rng);
      const double l = std::numbers::sqrt2 * random::sample_chi(params.beta * static_cast<double>(params.m) / 2.0, rng);
      z1[static_cast<std::size_t>(i)] = eig::eig_hermitian(models::perturb(J, l, Perturbation::Hermitian)).config.z(0);
    });
    r.checks.push_back(ks_check("random l z1 one-sample KS D", stats::ks_one_sample(z1, cdf), 0.00617));
  }
  return r;
}

CriterionResult c8(const Options& opt) {
  CriterionResult r{8, "anti-Hermitian-perturbation eigenvalue law", {}, 0.0, 0.0};
  const long reps = opt.reps.value_or(100000);
  const auto params = EnsembleParams::make(2.0, 1, 1);
  const double l = 1.0;
  std::vector<ComplexConfig> configs(static_cast<std::size_t>(reps));
  parallel_for(reps, opt.threads, [&](std::int64_t i) {
    RngStream rng(opt.seed, stream_id(8, 0, static_cast<std::uint64_t>(i)));
    const auto J = models::sample_chiral_jacobi(params, rng);
    configs[static_cast<std::size_t>(i)] = eig::eig_nonhermitian(models::perturb(J, l, Perturbation::AntiHermitian));
  });
  std::vector<double> upper;
  long pairs = 0;
  for (const auto& c : configs) {
    if (c.M() == 1) {
      ++pairs;
    } else {
      upper.push_back(c.imag_points(0));
    }
  }
  const double p = std::exp(-0.125);
  const double n = static_cast<double>(reps);
  const double se = std::sqrt(p * (1.0 - p) / n);
  r.checks.push_back(statistical("mirror-pair frequency |p_hat - e^(-1/8)| / stderr",
                                 std::abs(static_cast<double>(pairs) / n - p) / se, 4.0));

  // Conditional law of the upper point given two imaginary points and l = 1.
  const auto dp = DensityParams::chi(params);
  auto density = [&](double y1) {
    ComplexConfig c;
    c.imag_points = Eigen::Vector2d(y1, l - y1);
    return std::exp(densities::nonhermitian_logdensity(c, dp));
  };
  const stats::TabulatedCdf cdf(density, 0.5 * l, l);
  const auto ks = stats::ks_one_sample(upper, cdf);
  r.checks.push_back(ks_check("two-imaginary-point upper y one-sample KS D", ks,
                              kKsC / std::sqrt(static_cast<double>(upper.size()))));
  return r;
}

CriterionResult c9(const Options& opt) {
  CriterionResult r{9, "extra zero eigenvalues of the dense model", {}, 0.0, 0.0};
  const long seeds = opt.reps.value_or(100);
  std::uint64_t sub = 0;
  for (const auto& [m, n] : std::vector<std::pair<Index, Index>>{{3, 1}, {1, 3}}) {
    const long expected = m > n ? static_cast<long>(m - n - 1) : static_cast<long>(n - m);
    for (double beta : {1.0, 2.0, 4.0})
      for (Perturbation kind : {Perturbation::Hermitian, Perturbation::AntiHermitian}) {
        const auto params = EnsembleParams::make(beta, m, n);
        std::vector<int> wrong(static_cast<std::size_t>(seeds), 0);
        const std::uint64_t s = sub++;
        parallel_for(seeds, opt.threads, [&](std::int64_t i) {
          RngStream rng(opt.seed, stream_id(9, s, static_cast<std::uint64_t>(i)));
          const auto d = models::sample_dense(params, kind, 0.5 + 1.5 * rng.uniform(), rng);
          const auto rep = models::dense_reduction_check(d);
          wrong[static_cast<std::size_t>(i)] = (rep.dense_zero_count - rep.jacobi_zero_count == expected) ? 0 : 1;
        });
        const std::string name = "m=" + std::to_string(m) + " n=" + std::to_string(n) +
                                 " beta=" + std::to_string(static_cast<int>(beta)) +
                                 (kind == Perturbation::Hermitian ? " herm" : " antiherm") + " seeds without " +
                                 std::to_string(expected) + " extra zeros";
        r.checks.push_back(hard(name, std::accumulate(wrong.begin(), wrong.end(), 0.0), 0.5));
      }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Normalization table

std::string shape_name(double beta, Index m, Index n) {
  return "beta=" + std::to_string(static_cast<int>(beta)) + " m=" + std::to_string(m) + " n=" + std::to_string(n);
}

double spectral_mass(double beta, Index m, Index n) {
  const auto p = EnsembleParams::make(beta, m, n);
  using stats::fixed_bounds;
  const double tol = 1e-9;
  if (p.even() && p.m == 1) {
    return stats::quad_nd([&](const std::vector<double>& x) {
      return densities::spectral_logdensity(p, VectorXd::Constant(1, x[0]), VectorXd::Ones(1));
    }, {fixed_bounds(0.0, kInf)}, tol);
  }
  if (p.even() && p.m == 2) {
    // Ordered lambda_1 > lambda_2 times 2! for the symmetric density.
    return 2.0 * stats::quad_nd(
                     [&](const std::vector<double>& x) {
                       return densities::spectral_logdensity(p, Eigen::Vector2d(x[0], x[1]),
                                                             Eigen::Vector2d(x[2], 1.0 - x[2]));
                     },
                     {fixed_bounds(0.0, kInf), [](const std::vector<double>& o) { return std::make_pair(0.0, o[0]); },
                      fixed_bounds(0.0, 1.0)},
                     tol);
  }
  if (!p.even() && p.n == 1) {
    return stats::quad_nd([&](const std::vector<double>& x) {
      return densities::spectral_logdensity(p, VectorXd::Constant(1, x[0]), VectorXd::Constant(1, x[1]), 1.0 - x[1]);
    }, {fixed_bounds(0.0, kInf), fixed_bounds(0.0, 1.0)}, tol);
  }
  throw ParameterError("spectral_mass: unsupported shape");
}

// Fixed-l Hermitian density on its slice.
double fixed_mass(double beta, Index m, Index n, double l) {
  const auto dp = DensityParams::fixed(EnsembleParams::make(beta, m, n), l);
  using stats::fixed_bounds;
  if (dp.params.N() == 2) {
    return stats::quad_nd([&](const std::vector<double>& x) {
      return densities::hermitian_logdensity({Eigen::Vector2d(x[0], l - x[0])}, dp);
    }, {fixed_bounds(l, kInf)}, 1e-10);
  }
  if (dp.params.N() == 3) {
    // z = (z1, -t, l - z1 + t) with z1 > l and z1 - l < t < z1.
    return stats::quad_nd(
        [&](const std::vector<double>& x) {
          return densities::hermitian_logdensity({Eigen::Vector3d(x[0], -x[1], l - x[0] + x[1])}, dp);
        },
        {fixed_bounds(l, kInf), [l](const std::vector<double>& o) { return std::make_pair(o[0] - l, o[0]); }}, 1e-9);
  }
  throw ParameterError("fixed_mass: unsupported shape");
}

// Random-l Hermitian density over the alternating cone.
double random_mass(double beta, Index m, Index n) {
  const auto dp = DensityParams::chi(EnsembleParams::make(beta, m, n));
  using stats::fixed_bounds;
  auto inside = [](const std::vector<double>& o) { return std::make_pair(0.0, o.back()); };
  if (dp.params.N() == 2) {
    return stats::quad_nd([&](const std::vector<double>& x) {
      return densities::hermitian_logdensity({Eigen::Vector2d(x[0], -x[1])}, dp);
    }, {fixed_bounds(0.0, kInf), inside}, 1e-9);
  }
  if (dp.params.N() == 3) {
    return stats::quad_nd([&](const std::vector<double>& x) {
      return densities::hermitian_logdensity({Eigen::Vector3d(x[0], -x[1], x[2])}, dp);
    }, {fixed_bounds(0.0, kInf), inside, inside}, 1e-7);
  }
  throw ParameterError("random_mass: unsupported shape");
}

// Anti-Hermitian density summed over the strata X_{L,M}.
double nonhermitian_mass(double beta, Index m, Index n, double* pair_mass = nullptr) {
  const auto dp = DensityParams::chi(EnsembleParams::make(beta, m, n));
  using stats::fixed_bounds;
  const Index N = dp.params.N();
  auto logf = [&](Index L, const std::vector<double>& x) {
    ComplexConfig c;
    c.imag_points = Eigen::Map<const VectorXd>(x.data(), L);
    const Index M = (N - L) / 2;
    c.pair_x.resize(M);
    c.pair_y.resize(M);
    for (Index j = 0; j < M; ++j) {
      c.pair_x(j) = x[static_cast<std::size_t>(L + 2 * j)];
      c.pair_y(j) = x[static_cast<std::size_t>(L + 2 * j + 1)];
    }
    return densities::nonhermitian_logdensity(c, dp);
  };
  double total = 0.0, pairs = 0.0;
  for (Index M = 0; 2 * M <= N; ++M) {
    const Index L = N - 2 * M;
    std::vector<stats::AxisBounds> axes;
    // Imaginary points ordered y_0 > y_1 > ... (times L!), so the |y_j - y_k| kinks lie on the boundary.
    for (Index j = 0; j < L; ++j)
      axes.push_back(j == 0 ? fixed_bounds(0.0, kInf)
                            : stats::AxisBounds([](const std::vector<double>& o) { return std::make_pair(0.0, o.back()); }));
    for (Index j = 0; j < M; ++j) {
      axes.push_back(fixed_bounds(-kInf, kInf));
      axes.push_back(fixed_bounds(0.0, kInf));
    }
    const double mass = std::tgamma(static_cast<double>(L) + 1.0) * stats::quad_nd([&](const std::vector<double>& x) { return logf(L, x); }, axes,
                                       axes.size() == 3 ? 1e-7 : 1e-9);
    total += mass;
    if (M > 0) pairs += mass;
  }
  if (pair_mass) *pair_mass = pairs;
  return total;
}

}  // namespace

bool CriterionResult::hard_failure() const {
  if (!within_time()) return true;
  return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return !c.pass && !c.statistical; });
}

bool CriterionResult::statistical_failure() const {
  return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return !c.pass && c.statistical; });
}

bool NormCase::pass() const { return std::abs(integral - 1.0) < tolerance; }

std::vector<NormCase> normalization_table() {
  std::vector<NormCase> out;
  for (double beta : {1.0, 2.0, 4.0})
    for (Index m : {1, 2}) out.push_back({"spectral " + shape_name(beta, m, m), spectral_mass(beta, m, m)});
  out.push_back({"spectral " + shape_name(2.0, 1, 2), spectral_mass(2.0, 1, 2)});
  out.push_back({"spectral " + shape_name(2.0, 2, 1), spectral_mass(2.0, 2, 1)});
  out.push_back({"spectral " + shape_name(1.0, 2, 1), spectral_mass(1.0, 2, 1)});

  for (double l : {0.5, 1.0, 2.0})
    out.push_back({"herm fixed l=" + std::to_string(l).substr(0, 3) + " " + shape_name(2.0, 1, 1), fixed_mass(2.0, 1, 1, l)});
  for (double beta : {1.0, 4.0}) out.push_back({"herm fixed l=1.0 " + shape_name(beta, 1, 1), fixed_mass(beta, 1, 1, 1.0)});
  out.push_back({"herm fixed l=1.0 " + shape_name(2.0, 1, 2), fixed_mass(2.0, 1, 2, 1.0)});
  out.push_back({"herm fixed l=1.0 " + shape_name(2.0, 2, 1), fixed_mass(2.0, 2, 1, 1.0)});
  out.push_back({"herm fixed l=1.0 " + shape_name(1.0, 2, 1), fixed_mass(1.0, 2, 1, 1.0)});

  for (double beta : {1.0, 2.0, 4.0}) out.push_back({"herm random l " + shape_name(beta, 1, 1), random_mass(beta, 1, 1)});
  out.push_back({"herm random l " + shape_name(2.0, 2, 1), random_mass(2.0, 2, 1)});

  for (double beta : {1.0, 2.0, 4.0})
    out.push_back({"antiherm random l " + shape_name(beta, 1, 1), nonhermitian_mass(beta, 1, 1)});
  out.push_back({"antiherm random l " + shape_name(2.0, 2, 1), nonhermitian_mass(2.0, 2, 1)});
  return out;
}

CriterionResult criterion(int id, const Options& options) {
  using Fn = CriterionResult (*)(const Options&);
  static const Fn table[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9};
  if (id < 1 || id > 9) throw ParameterError("criterion id must be in 1..9");
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = table[id - 1](options);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "equivalence") return {1, 2, 9};
  if (suite == "densities") return {3, 7, 8};
  if (suite == "normalization") return {4};
  if (suite == "jacobian") return {5};
  if (suite == "location" || suite == "roundtrip") return {6};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9};
  throw ParameterError("unknown suite '" + suite + "'");
}

std::vector<CriterionResult> run_suite(const std::string& suite, const Options& options) {
  std::vector<CriterionResult> out;
  for (int id : suite_criteria(suite)) out.push_back(criterion(id, options));
  return out;
}

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass},
                      {"statistical", c.statistical}});
  return {{"criterion", "C" + std::to_string(r.id)}, {"title", r.title},  {"pass", r.pass()},
          {"seconds", r.seconds},                    {"time_limit", r.time_limit}, {"checks", checks}};
}

nlohmann::json report_json(const std::vector<CriterionResult>& results, const Options& options,
                           const std::string& suite) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  nlohmann::json out = {{"schema", 1},
                        {"suite", suite},
                        {"seed", options.seed},
                        {"threads", options.threads},
                        {"exit_code", exit_code(results)},
                        {"criteria", arr}};
  if (std::any_of(results.begin(), results.end(), [](const auto& r) { return r.id == 5; }))
    out["jacobian_fd"] = {{"step", options.jacobian_step}, {"richardson", options.jacobian_richardson}};
  return out;
}

int exit_code(const std::vector<CriterionResult>& results) {
  if (std::any_of(results.begin(), results.end(), [](const auto& r) { return r.hard_failure(); })) return 1;
  if (std::any_of(results.begin(), results.end(), [](const auto& r) { return r.statistical_failure(); })) return 2;
  return 0;
}

}  // namespace chiral::verify
