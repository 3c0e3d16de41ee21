#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rcb {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int workers = 1;
  std::uint64_t seed = 42;
  // empty: all criteria
  std::vector<int> only;
  std::function<void(const CriterionResult&)> on_result;
};

inline constexpr int kCriterionCount = 12;

/// Runs the acceptance battery. An exception inside a criterion counts as a
/// failure of that criterion and does not stop the others.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS [ 3] title: detail (1.2 s)"
std::string format_result(const CriterionResult& r);

}  // namespace rcb
