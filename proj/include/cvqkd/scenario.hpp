#pragma once

// Scenario runner: executes one configured scenario, writes its CSV/JSON
// artifacts and a summary with pass/fail against the embedded expectations.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cvqkd/config.hpp"
#include "cvqkd/error.hpp"

namespace cvqkd::scenario {

/// A scenario stage failed; carries the stage name for the exit report.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Expectation {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double target = 0.0;
  std::string detail;
};

struct RunReport {
  config::Scenario scenario = config::Scenario::Loopback10p4km;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<Expectation> expectations;
  std::vector<std::string> artifacts;  ///< file names inside the output directory

  bool passed() const;
};

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Results must be
/// written by index; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

/// Runs the scenario and writes into cfg.output_dir (created if missing).
/// Throws StageError when a stage cannot complete.
RunReport run(const config::ScenarioConfig& cfg, int jobs = 1);

}  // namespace cvqkd::scenario
