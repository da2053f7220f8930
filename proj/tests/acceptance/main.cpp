#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cvqkd acceptance suite"};
  cvqkd::acceptance::Options options;
  options.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--only", options.only, "criterion numbers to run (default: all)")
      ->check(CLI::Range(1, cvqkd::acceptance::kCriterionCount));
  app.add_option("--jobs", options.jobs, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const auto results = cvqkd::acceptance::run_all(options, std::cout);
  for (const auto& r : results) {
    if (!r.passed) return 1;
  }
  return 0;
}
