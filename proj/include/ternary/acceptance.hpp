#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ternary/continued_fraction.hpp"

namespace ternary {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  // measured values, or the first failure
  double seconds = 0.0;
};

struct AcceptanceOptions {
  unsigned threads = 0;  // 0: all cores
  mpfr_prec_t precision_cap = kDefaultPrecisionCap;
  std::uint64_t seed = 20261019;  // drives the random multiplier sets
};

inline constexpr int kCriterionCount = 11;

/// Runs one criterion, 1..kCriterionCount. Library errors count as failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

/// Runs every criterion in order, reporting each as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  residue structure  (0.41 s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace ternary
