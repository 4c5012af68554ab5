#pragma once

// Verification suites. Each criterion is a list of named checks comparing a
// measured value with a bound; suites group criteria.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rittcalc/random.hpp"
#include "rittcalc/report.hpp"

namespace rittcalc::verify {

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::string relation;  // "<=", ">=", "==" or "in" (value within [bound, bound2])
  double bound2 = 0.0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  bool passed() const;
  // The failing check with the largest violation, or the tightest passing one.
  const Check* headline() const;
};

enum class Suite { identities, contour, similarity, rad, gallery, all };

std::optional<Suite> parse_suite(const std::string& s);
std::string to_string(Suite s);

inline constexpr int kCriteria = 11;

// Criterion ids run by a suite.
std::vector<int> criteria(Suite s);
std::string criterion_title(int id);

CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed);

struct SuiteReport {
  Suite suite = Suite::all;
  std::uint64_t seed = kDefaultSeed;
  std::vector<CriterionResult> results;
  bool passed() const;
};

SuiteReport run_suite(Suite s, std::uint64_t seed = kDefaultSeed);

// Per-criterion wall time is included only with timing = true.
report::Json to_json(const SuiteReport& r, bool timing);

}  // namespace rittcalc::verify
