#include <atomic>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "cvqkd/config.hpp"
#include "cvqkd/scenario.hpp"
#include "cvqkd/sim.hpp"

using namespace cvqkd;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cvqkd_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}
}  // namespace

TEST_CASE("parallel_for visits every index once") {
  for (int jobs : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(100);
    scenario::parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  for (int jobs : {1, 4}) {
    try {
      scenario::parallel_for(50, jobs, [](std::size_t i) {
        if (i == 17 || i == 40) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "17");
    }
  }
}

TEST_CASE("link runs are reproducible per seed") {
  sim::LinkConfig cfg = config::defaults_for(config::Scenario::P2p5p2km).link;
  cfg.packets = 2;
  cfg.dark_frames = 2000;
  const auto a = sim::run_link(cfg, 5);
  const auto b = sim::run_link(cfg, 5);
  const auto c = sim::run_link(cfg, 6);
  REQUIRE(a.packets.size() == 2);
  CHECK(a.accepted == 2);
  CHECK(a.average.mean.xi_hat == b.average.mean.xi_hat);
  CHECK(a.average.mean.v_b == b.average.mean.v_b);
  CHECK(a.average.mean.v_b != c.average.mean.v_b);
}

TEST_CASE("noise-free link reproduces Alice's scaled symbols") {
  sim::LinkConfig cfg = config::defaults_for(config::Scenario::Loopback10p4km).link;
  cfg.dark_frames = 2000;
  const auto r = sim::noise_free_exactness(cfg, 3);
  CHECK(r.accepted);
  CHECK(r.relative_error < 1e-9);
}

TEST_CASE("pulse overlap and offset wrapping") {
  CHECK(sim::pulse_overlap(0.0, 12.0) == 1.0);
  CHECK(sim::pulse_overlap(6.0, 12.0) == doctest::Approx(0.5));
  CHECK(sim::pulse_overlap(-20.0, 12.0) == 0.0);
  CHECK(sim::wrapped_offset(510.0, 0.0) == doctest::Approx(10.0));
  CHECK(sim::wrapped_offset(260.0, 0.0) == doctest::Approx(-240.0));
}

TEST_CASE("table1 scenario writes stamped artifacts and a summary") {
  auto cfg = config::defaults_for(config::Scenario::Table1);
  const fs::path dir = scratch("table1");
  cfg.output_dir = dir.string();
  const auto report = scenario::run(cfg, 2);
  CHECK(report.config_hash == config::hash_hex(config::config_hash(cfg)));
  CHECK(report.passed());
  for (const auto& name : report.artifacts) CHECK(fs::exists(dir / name));
  const std::string stamp = "# scenario=table1 config_hash=" + report.config_hash + " seed=" + std::to_string(cfg.seed);
  CHECK(first_line(dir / "table1.csv") == stamp);
  CHECK(slurp(dir / "summary.json").find("\"config_hash\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("distance sweep output is independent of the worker count") {
  auto cfg = config::defaults_for(config::Scenario::DistanceSweep);
  const fs::path d1 = scratch("sweep1"), d4 = scratch("sweep4");
  cfg.output_dir = d1.string();
  scenario::run(cfg, 1);
  cfg.output_dir = d4.string();
  scenario::run(cfg, 4);
  CHECK(slurp(d1 / "sweep.csv") == slurp(d4 / "sweep.csv"));
  CHECK(slurp(d1 / "sweep.json") == slurp(d4 / "sweep.json"));
  fs::remove_all(d1);
  fs::remove_all(d4);
}
