#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chiral/densities.hpp"
#include "chiral/eig.hpp"
#include "chiral/error.hpp"
#include "chiral/io.hpp"
#include "chiral/models.hpp"
#include "chiral/parallel.hpp"
#include "chiral/random.hpp"
#include "chiral/verify.hpp"

#ifndef CHIRAL_VERSION
#define CHIRAL_VERSION "0.0.0"
#endif

namespace {

using namespace chiral;
using models::EnsembleParams;
using models::Perturbation;
using Metadata = std::vector<std::pair<std::string, std::string>>;

constexpr const char* kSeedEnv = "CHIRAL_SEED";

// Eigenvalue classes in the `class` column.
enum ClassCode { kReal = 0, kImag = 1, kPair = 2 };
constexpr const char* kClassCodes = "0=real,1=imag,2=pair";

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw ParameterError(std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
  }
}

Perturbation parse_kind(const std::string& s) {
  if (s == "none") return Perturbation::None;
  if (s == "herm") return Perturbation::Hermitian;
  if (s == "antiherm") return Perturbation::AntiHermitian;
  throw ParameterError("unknown kind '" + s + "'");
}

// "chi" or a positive number.
std::optional<double> parse_l(const std::string& s) {
  if (s == "chi") return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !(v > 0.0) || !std::isfinite(v))
    throw ParameterError("--l must be a positive number or 'chi', got '" + s + "'");
  return v;
}

std::string str(double v) { return io::format_double(v); }

Metadata base_metadata(const std::string& command, std::optional<std::uint64_t> seed = std::nullopt) {
  Metadata m = {{"version", CHIRAL_VERSION}, {"command", command}};
  if (seed) m.emplace_back("seed", std::to_string(*seed));
  return m;
}

// Groups table rows by the integer `rep` column, in order of first appearance.
std::vector<std::pair<long, std::vector<std::size_t>>> group_by_rep(const io::Table& t) {
  const std::size_t rc = t.column("rep");
  std::vector<std::pair<long, std::vector<std::size_t>>> groups;
  std::map<long, std::size_t> where;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const long rep = std::lround(t.rows[i][rc]);
    auto [it, fresh] = where.emplace(rep, groups.size());
    if (fresh) groups.push_back({rep, {}});
    groups[it->second].second.push_back(i);
  }
  return groups;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  double beta = 2.0;
  long m = 1, n = 1;
  std::string kind = "none", l = "1", out = "-", format = "csv", emit = "auto";
  long reps = 1;
  std::optional<std::uint64_t> seed;
  bool dense = false;
  int threads = 1;
};

void eig_rows(const VectorXc& z, const std::vector<int>& classes, long rep, std::vector<std::vector<double>>& rows) {
  for (Index k = 0; k < z.size(); ++k)
    rows.push_back({static_cast<double>(rep), static_cast<double>(k + 1), z(k).real(), z(k).imag(),
                    static_cast<double>(classes[static_cast<std::size_t>(k)])});
}

// Eigenvalues of a (perturbed) Jacobi matrix with their classes.
std::pair<VectorXc, std::vector<int>> jacobi_spectrum(const models::JacobiMatrix& J, double l, Perturbation kind) {
  if (kind == Perturbation::AntiHermitian) {
    const auto c = eig::eig_nonhermitian(models::perturb(J, l, kind));
    std::vector<int> cls(static_cast<std::size_t>(c.L()), kImag);
    cls.resize(static_cast<std::size_t>(c.N()), kPair);
    return {c.points(), cls};
  }
  VectorXd z;
  if (kind == Perturbation::Hermitian) {
    z = eig::eig_hermitian(models::perturb(J, l, kind)).config.z;
  } else {
    z = eig::symmetric_tridiagonal_eigen(VectorXd::Zero(J.N()), J.a).values;
    std::sort(z.data(), z.data() + z.size(), std::greater<>());
  }
  return {z.cast<Complex>(), std::vector<int>(static_cast<std::size_t>(z.size()), kReal)};
}

int cmd_sample(const SampleArgs& a) {
  const auto params = EnsembleParams::make(a.beta, a.m, a.n);
  const Perturbation kind = parse_kind(a.kind);
  const std::optional<double> fixed_l = parse_l(a.l);
  const std::uint64_t seed = a.seed.value_or(default_seed());
  if (a.reps < 1) throw ParameterError("--reps must be positive");
  std::string emit = a.emit;
  if (emit == "auto") emit = kind == Perturbation::None ? "jacobi" : "eigs";
  if (emit != "jacobi" && emit != "eigs") throw ParameterError("--emit must be auto, jacobi or eigs");
  if (a.dense && !(a.beta == 1.0 || a.beta == 2.0 || a.beta == 4.0))
    throw ParameterError("--dense needs beta in {1, 2, 4}; other beta have only the Jacobi form");
  if (a.dense && emit == "jacobi") throw ParameterError("--dense emits eigenvalues only");

  // One stream per replicate; rows are gathered per rep and written in rep order.
  std::vector<std::vector<std::vector<double>>> per_rep(static_cast<std::size_t>(a.reps));
  parallel_for(a.reps, a.threads, [&](std::int64_t rep) {
    random::RngStream rng(seed, static_cast<std::uint64_t>(rep));
    auto& rows = per_rep[static_cast<std::size_t>(rep)];
    if (a.dense) {
      const double l = fixed_l ? *fixed_l
                               : std::numbers::sqrt2 * random::sample_chi(a.beta * static_cast<double>(a.m) / 2.0, rng);
      const auto d = models::sample_dense(params, kind, l, rng);
      VectorXc z = models::dense_eigenvalues(d);
      std::vector<std::size_t> order(static_cast<std::size_t>(z.size()));
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const Complex p = z(static_cast<Index>(x)), q = z(static_cast<Index>(y));
        return p.real() != q.real() ? p.real() > q.real() : p.imag() > q.imag();
      });
      VectorXc sorted(z.size());
      std::vector<int> cls(order.size(), kReal);
      for (std::size_t k = 0; k < order.size(); ++k) {
        const Complex v = z(static_cast<Index>(order[k]));
        sorted(static_cast<Index>(k)) = v;
        if (kind == Perturbation::AntiHermitian)
          cls[k] = std::abs(v.real()) > eig::kClassificationTol * (1.0 + std::abs(v)) ? kPair : kImag;
      }
      eig_rows(sorted, cls, rep, rows);
      return;
    }
    const auto J = models::sample_chiral_jacobi(params, rng);
    const double l = fixed_l ? *fixed_l
                             : std::numbers::sqrt2 * random::sample_chi(a.beta * static_cast<double>(a.m) / 2.0, rng);
    if (emit == "jacobi") {
      for (Index j = 0; j < J.a.size(); ++j) {
        std::vector<double> row = {static_cast<double>(rep), static_cast<double>(j + 1), J.a(j)};
        if (kind != Perturbation::None) row.push_back(l);
        rows.push_back(std::move(row));
      }
      return;
    }
    const auto [z, cls] = jacobi_spectrum(J, l, kind);
    eig_rows(z, cls, rep, rows);
  });

  io::Table t;
  t.metadata = base_metadata("sample", seed);
  t.metadata.insert(t.metadata.end(), {{"beta", str(a.beta)},
                                       {"m", std::to_string(a.m)},
                                       {"n", std::to_string(a.n)},
                                       {"kind", a.kind},
                                       {"l", a.l},
                                       {"reps", std::to_string(a.reps)},
                                       {"dense", a.dense ? "1" : "0"},
                                       {"emit", emit},
                                       {"format", a.format},
                                       {"threads", std::to_string(a.threads)}});
  if (emit == "jacobi") {
    t.columns = {"rep", "j", "a_j"};
    if (kind != Perturbation::None) t.columns.push_back("l");
  } else {
    t.columns = {"rep", "idx", "re", "im", "class"};
    t.metadata.emplace_back("class_codes", kClassCodes);
  }
  for (auto& rows : per_rep)
    for (auto& row : rows) t.rows.push_back(std::move(row));
  io::write_file(a.out, t, a.format);
  return 0;
}

// ---------------------------------------------------------------------------
// eig

struct EigArgs {
  std::string in, out = "-", format = "csv", kind = "herm";
  std::optional<double> l;
};

int cmd_eig(const EigArgs& a) {
  const io::Table in = io::read_file(a.in);
  const Perturbation kind = parse_kind(a.kind);
  const std::size_t jc = in.column("j"), ac = in.column("a_j");
  const bool has_l = in.has_column("l");
  if (kind != Perturbation::None && !has_l && !a.l) throw ParameterError("input has no l column; pass --l");

  io::Table t;
  t.metadata = base_metadata("eig");
  t.metadata.insert(t.metadata.end(), {{"input", a.in}, {"kind", a.kind}, {"class_codes", kClassCodes}});
  if (a.l) t.metadata.emplace_back("l", str(*a.l));
  t.columns = {"rep", "idx", "re", "im", "class"};
  for (const auto& [rep, idx] : group_by_rep(in)) {
    std::vector<std::pair<double, double>> entries;
    for (std::size_t i : idx) entries.emplace_back(in.rows[i][jc], in.rows[i][ac]);
    std::sort(entries.begin(), entries.end());
    models::JacobiMatrix J;
    J.a.resize(static_cast<Index>(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k) J.a(static_cast<Index>(k)) = entries[k].second;
    const double l = a.l ? *a.l : (has_l ? in.rows[idx.front()][in.column("l")] : 0.0);
    const auto [z, cls] = jacobi_spectrum(J, l, kind);
    eig_rows(z, cls, rep, t.rows);
  }
  io::write_file(a.out, t, a.format);
  return 0;
}

// ---------------------------------------------------------------------------
// density

struct DensityArgs {
  std::string law = "herm", in, out = "-", format = "csv", l = "chi";
  double beta = 2.0;
  long m = 1, n = 1;
};

int cmd_density_eval(const DensityArgs& a) {
  const auto params = EnsembleParams::make(a.beta, a.m, a.n);
  const std::optional<double> fixed_l = parse_l(a.l);
  const auto dp = fixed_l ? densities::DensityParams::fixed(params, *fixed_l) : densities::DensityParams::chi(params);
  const io::Table in = io::read_file(a.in);

  io::Table t;
  t.metadata = base_metadata("density eval");
  t.metadata.insert(t.metadata.end(), {{"input", a.in},
                                       {"law", a.law},
                                       {"beta", str(a.beta)},
                                       {"m", std::to_string(a.m)},
                                       {"n", std::to_string(a.n)},
                                       {"l", a.l}});
  t.columns = {"rep", "logpdf"};
  for (const auto& [rep, idx] : group_by_rep(in)) {
    double value = 0.0;
    if (a.law == "spectral") {
      const std::size_t lc = in.column("lambda"), wc = in.column("weight");
      std::vector<std::pair<double, double>> points;
      std::optional<double> w0;
      for (std::size_t i : idx) {
        if (in.rows[i][lc] == 0.0) {
          w0 = in.rows[i][wc];
        } else {
          points.emplace_back(in.rows[i][lc], in.rows[i][wc]);
        }
      }
      std::sort(points.begin(), points.end(), std::greater<>());
      VectorXd lambdas(static_cast<Index>(points.size())), weights(static_cast<Index>(points.size()));
      for (std::size_t k = 0; k < points.size(); ++k) {
        lambdas(static_cast<Index>(k)) = points[k].first;
        weights(static_cast<Index>(k)) = points[k].second;
      }
      value = densities::spectral_logdensity(params, lambdas, weights, w0);
    } else {
      const std::size_t rc = in.column("re");
      const std::optional<std::size_t> ic = in.has_column("im") ? std::optional(in.column("im")) : std::nullopt;
      VectorXc z(static_cast<Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k)
        z(static_cast<Index>(k)) = Complex(in.rows[idx[k]][rc], ic ? in.rows[idx[k]][*ic] : 0.0);
      if (a.law == "herm") {
        value = densities::hermitian_logdensity({z.real()}, dp);
      } else if (a.law == "antiherm") {
        value = densities::nonhermitian_logdensity(eig::classify(z), dp);
      } else {
        throw ParameterError("--law must be herm, antiherm or spectral");
      }
    }
    t.rows.push_back({static_cast<double>(rep), value});
  }
  io::write_file(a.out, t, a.format);
  return 0;
}

int cmd_density_check_norm(const std::string& format) {
  const auto table = verify::normalization_table();
  bool ok = true;
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : table) {
      arr.push_back({{"name", c.name}, {"integral", c.integral}, {"tolerance", c.tolerance}, {"pass", c.pass()}});
      ok = ok && c.pass();
    }
    std::cout << nlohmann::json{{"schema", io::kSchemaVersion}, {"cases", arr}, {"pass", ok}}.dump(1) << '\n';
  } else {
    for (const auto& c : table) {
      char line[256];
      std::snprintf(line, sizeof line, "%-4s %-36s integral=%.12f |err|=%.2e", c.pass() ? "PASS" : "FAIL",
                    c.name.c_str(), c.integral, std::abs(c.integral - 1.0));
      std::cout << line << '\n';
      ok = ok && c.pass();
    }
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite, out = "-", parity, kind;
  std::optional<std::uint64_t> seed;
  std::optional<long> reps;
  std::optional<int> trials, s;
  std::optional<double> step;
  bool richardson = false;
  int threads = 1;
};

int cmd_verify(const VerifyArgs& a) {
  verify::Options opt;
  opt.seed = a.seed.value_or(default_seed());
  opt.threads = a.threads;
  opt.reps = a.reps;
  opt.trials = a.trials;
  opt.jacobian_step = a.step.value_or(opt.jacobian_step);
  opt.jacobian_richardson = a.richardson;
  const bool runs_jacobian = a.suite == "jacobian" || a.suite == "all";
  if ((a.step || a.richardson) && !runs_jacobian)
    throw ParameterError("--step and --richardson apply to the jacobian suite only");
  if (!(opt.jacobian_step > 0.0)) throw ParameterError("--step must be positive");
  if (!a.parity.empty() || !a.kind.empty() || a.s) {
    if (a.suite != "jacobian") throw ParameterError("--parity, --kind and --s apply to the jacobian suite only");
    for (const auto& c : jacobians::full_grid()) {
      if (!a.parity.empty() && (c.parity == jacobians::Parity::Even ? "even" : "odd") != a.parity) continue;
      if (!a.kind.empty() && (c.kind == Perturbation::Hermitian ? "herm" : "antiherm") != a.kind) continue;
      if (a.s && c.s != *a.s) continue;
      opt.jacobian_cases.push_back(c);
    }
    if (opt.jacobian_cases.empty()) throw ParameterError("no Jacobian case matches the filters");
  }
  const auto results = verify::run_suite(a.suite, opt);
  nlohmann::json report = verify::report_json(results, opt, a.suite);
  report["version"] = CHIRAL_VERSION;
  for (const auto& r : results) {
    std::cerr << "C" << r.id << ' ' << (r.pass() ? "PASS" : "FAIL") << ' ' << r.title << '\n';
  }
  const std::string text = report.dump(1) + '\n';
  if (a.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(a.out);
    if (!(f << text)) throw Error("cannot write '" + a.out + "'");
  }
  return verify::exit_code(results);
}

// ---------------------------------------------------------------------------
// export

struct ExportArgs {
  std::string in, out = "-", to = "json", column, x = "re", y = "im";
  int bins = 100, gridsize = 30;
  std::optional<double> lo, hi;
};

int cmd_export(const ExportArgs& a) {
  const io::Table in = io::read_file(a.in);
  if (a.to == "csv" || a.to == "json") {
    io::write_file(a.out, in, a.to);
    return 0;
  }
  io::Table t;
  t.metadata = in.metadata;
  t.metadata.emplace_back("export", a.to);
  if (a.to == "hist") {
    std::string name = a.column;
    if (name.empty()) name = in.has_column("re") ? "re" : in.columns.back();
    const std::size_t c = in.column(name);
    std::vector<double> v;
    v.reserve(in.rows.size());
    for (const auto& r : in.rows) v.push_back(r[c]);
    if (a.lo.has_value() != a.hi.has_value()) throw ParameterError("--lo and --hi go together");
    const auto h = a.lo ? io::histogram(v, a.bins, *a.lo, *a.hi) : io::histogram(v, a.bins);
    nlohmann::json j = io::to_json(h);
    j["column"] = name;
    nlohmann::json meta = nlohmann::json::array();
    for (const auto& [k, val] : t.metadata) meta.push_back({k, val});
    j["metadata"] = meta;
    const std::string text = j.dump(1) + '\n';
    if (a.out == "-") {
      std::cout << text;
    } else {
      std::ofstream f(a.out);
      if (!(f << text)) throw Error("cannot write '" + a.out + "'");
    }
    return 0;
  }
  if (a.to == "hexbin" || a.to == "hexbin-json") {
    const std::size_t xc = in.column(a.x), yc = in.column(a.y);
    std::vector<double> xs, ys;
    for (const auto& r : in.rows) {
      xs.push_back(r[xc]);
      ys.push_back(r[yc]);
    }
    t.metadata.emplace_back("gridsize", std::to_string(a.gridsize));
    t.columns = {"x", "y", "count"};
    for (const auto& cell : io::hexbin(xs, ys, a.gridsize))
      t.rows.push_back({cell.x, cell.y, static_cast<double>(cell.count)});
    io::write_file(a.out, t, a.to == "hexbin" ? "csv" : "json");
    return 0;
  }
  throw ParameterError("--to must be csv, json, hist, hexbin or hexbin-json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chiral beta-ensembles with rank-one perturbations: sampling, densities and verification"};
  app.set_version_flag("--version", CHIRAL_VERSION);
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample Jacobi entries or eigenvalues");
  sample->add_option("--beta", sa.beta, "Dyson index (> 0)")->required();
  sample->add_option("--m", sa.m, "Rows of X")->required();
  sample->add_option("--n", sa.n, "Columns of X")->required();
  sample->add_option("--kind", sa.kind, "Perturbation")->check(CLI::IsMember({"none", "herm", "antiherm"}));
  sample->add_option("--l", sa.l, "Coupling: positive number or 'chi'");
  sample->add_option("--reps", sa.reps, "Replicates");
  sample->add_option("--seed", sa.seed, std::string("Seed (default from ") + kSeedEnv + ", else 1)");
  sample->add_option("--out", sa.out, "Output path ('-' = stdout)");
  sample->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "json"}));
  sample->add_option("--emit", sa.emit, "auto, jacobi or eigs")->check(CLI::IsMember({"auto", "jacobi", "eigs"}));
  sample->add_flag("--dense", sa.dense, "Sample the dense model (beta in {1, 2, 4})");
  sample->add_option("--threads", sa.threads, "Worker threads (output does not depend on it)");

  EigArgs ea;
  auto* eigc = app.add_subcommand("eig", "Eigenvalues of sampled Jacobi matrices");
  eigc->add_option("--in", ea.in, "Jacobi table (rep, j, a_j[, l])")->required();
  eigc->add_option("--kind", ea.kind)->check(CLI::IsMember({"none", "herm", "antiherm"}));
  eigc->add_option("--l", ea.l, "Coupling when the input has no l column");
  eigc->add_option("--out", ea.out);
  eigc->add_option("--format", ea.format)->check(CLI::IsMember({"csv", "json"}));

  DensityArgs da;
  std::string norm_format = "text";
  auto* density = app.add_subcommand("density", "Closed-form densities");
  density->require_subcommand(1);
  auto* eval = density->add_subcommand("eval", "Log-density of each configuration in a table");
  eval->add_option("--law", da.law)->check(CLI::IsMember({"herm", "antiherm", "spectral"}));
  eval->add_option("--in", da.in, "rep, idx, re[, im] or rep, idx, lambda, weight")->required();
  eval->add_option("--beta", da.beta)->required();
  eval->add_option("--m", da.m)->required();
  eval->add_option("--n", da.n)->required();
  eval->add_option("--l", da.l, "Coupling: positive number (fixed) or 'chi'");
  eval->add_option("--out", da.out);
  eval->add_option("--format", da.format)->check(CLI::IsMember({"csv", "json"}));
  auto* norm = density->add_subcommand("check-norm", "Quadrature of every density; pass/fail table");
  norm->add_option("--format", norm_format)->check(CLI::IsMember({"text", "json"}));

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run an acceptance suite; exit 0 pass, 1 hard, 2 statistical failure");
  ver->add_option("suite", va.suite)
      ->required()
      ->check(CLI::IsMember({"equivalence", "jacobian", "normalization", "roundtrip", "location", "densities", "all"}));
  ver->add_option("--seed", va.seed);
  ver->add_option("--threads", va.threads);
  ver->add_option("--reps", va.reps, "Override Monte Carlo sample counts");
  ver->add_option("--trials", va.trials, "Points per Jacobian case");
  ver->add_option("--parity", va.parity)->check(CLI::IsMember({"even", "odd"}));
  ver->add_option("--kind", va.kind)->check(CLI::IsMember({"herm", "antiherm"}));
  ver->add_option("--s", va.s);
  ver->add_option("--step", va.step, "Finite-difference step (default 1e-5)");
  ver->add_flag("--richardson", va.richardson, "Richardson-extrapolated differences (for larger steps)");
  ver->add_option("--out", va.out, "JSON report path ('-' = stdout)");

  ExportArgs xa;
  auto* exp = app.add_subcommand("export", "Convert tables or bin them for plotting");
  exp->add_option("--in", xa.in)->required()->check(CLI::ExistingFile);
  exp->add_option("--out", xa.out);
  exp->add_option("--to", xa.to)->check(CLI::IsMember({"csv", "json", "hist", "hexbin", "hexbin-json"}));
  exp->add_option("--column", xa.column, "Histogram column (default re)");
  exp->add_option("--bins", xa.bins);
  exp->add_option("--lo", xa.lo);
  exp->add_option("--hi", xa.hi);
  exp->add_option("--x", xa.x);
  exp->add_option("--y", xa.y);
  exp->add_option("--gridsize", xa.gridsize);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sample) return cmd_sample(sa);
    if (*eigc) return cmd_eig(ea);
    if (*eval) return cmd_density_eval(da);
    if (*norm) return cmd_density_check_norm(norm_format);
    if (*ver) return cmd_verify(va);
    if (*exp) return cmd_export(xa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
