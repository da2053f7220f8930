#pragma once

// Acceptance suite: one check per criterion, each reporting pass/fail with
// pinned tolerances. Shared by the acceptance binary and `cvqkd-lab selftest`.

#include <iosfwd>
#include <string>
#include <vector>

namespace cvqkd::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  int jobs = 1;
  std::vector<int> only;  ///< empty: every criterion
  std::ostream* progress = nullptr;
};

constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const Options& options);

/// Runs the selected criteria and prints one line per criterion to out.
std::vector<CriterionResult> run_all(const Options& options, std::ostream& out);

std::string format_line(const CriterionResult& r);

}  // namespace cvqkd::acceptance
