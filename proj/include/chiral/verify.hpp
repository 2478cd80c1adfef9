#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chiral/jacobians.hpp"

namespace chiral::verify {

// One measured quantity compared against its threshold.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool statistical = false;  // Monte Carlo test: may fail by chance at level alpha
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 = none

  bool within_time() const { return time_limit <= 0.0 || seconds < time_limit; }
  bool hard_failure() const;
  bool statistical_failure() const;
  bool pass() const { return !hard_failure() && !statistical_failure(); }
};

struct Options {
  std::uint64_t seed = 1;
  int threads = 1;
  // Overrides of the default sample counts.
  std::optional<long> reps;
  std::optional<int> trials;
  // Subset of the Jacobian grid for criterion 5; empty means the full grid.
  std::vector<jacobians::JacobianCase> jacobian_cases;
  // Finite-difference settings for criterion 5.
  double jacobian_step = 1e-5;
  bool jacobian_richardson = false;
};

CriterionResult criterion(int id, const Options& options);

// Criterion ids of a suite: equivalence, jacobian, normalization, roundtrip,
// location, densities, all.
std::vector<int> suite_criteria(const std::string& suite);

std::vector<CriterionResult> run_suite(const std::string& suite, const Options& options);

nlohmann::json to_json(const CriterionResult& r);
nlohmann::json report_json(const std::vector<CriterionResult>& results, const Options& options,
                           const std::string& suite);

// 0 = pass, 1 = hard failure, 2 = statistical failure only.
int exit_code(const std::vector<CriterionResult>& results);

// One normalization case of the quadrature table.
struct NormCase {
  std::string name;
  double integral = 0.0;
  double tolerance = 1e-5;
  bool pass() const;
};

// Quadrature of every closed-form density on the grid (dimension <= 3).
std::vector<NormCase> normalization_table();

}  // namespace chiral::verify
