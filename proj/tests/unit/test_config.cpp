#include <sstream>
#include <string>

#include "doctest.h"

#include "cvqkd/config.hpp"
#include "cvqkd/error.hpp"

using namespace cvqkd;
using namespace cvqkd::config;

TEST_CASE("FNV-1a 64 test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hash_hex(0xaf63dc4c8601ec8cULL) == "af63dc4c8601ec8c");
}

TEST_CASE("scenario names round-trip") {
  for (const Scenario s : all_scenarios()) CHECK(parse_scenario(to_string(s)) == s);
  CHECK(all_scenarios().size() == 6);
  try {
    parse_scenario("loopback");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("p2p_5p2km") != std::string::npos);
  }
}

TEST_CASE("presets") {
  const auto loop = defaults_for(Scenario::Loopback10p4km);
  CHECK(loop.link.channel.loss_db() == doctest::Approx(8.0));
  const auto p2p = defaults_for(Scenario::P2p5p2km);
  CHECK(p2p.link.channel.distance_km == 5.2);
  CHECK(p2p.output_dir == "out/p2p_5p2km");
  for (const Scenario s : all_scenarios()) CHECK_NOTHROW(defaults_for(s).validate());
}

TEST_CASE("key = value with sections and comments") {
  ScenarioConfig cfg = defaults_for(Scenario::Loopback10p4km);
  apply_text(cfg,
             "# comment\n"
             "scenario = loopback_10p4km\n"
             "packets = 7   # trailing comment\n"
             "[channel]\n"
             "distance_km = 3.5\n"
             "[alice]\n"
             "va_grid = 1, 2, 3\n"
             "[receiver]\n"
             "noise_enabled = false\n");
  CHECK(cfg.packets == 7);
  CHECK(cfg.link.channel.distance_km == 3.5);
  CHECK(cfg.va_grid == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_FALSE(cfg.link.receiver.noise_enabled);
}

TEST_CASE("every problem is reported at once") {
  ScenarioConfig cfg = defaults_for(Scenario::Loopback10p4km);
  try {
    apply_text(cfg, "bogus = 1\npackets = many\nno equals sign\nscenario = table1\n", "f.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("4 configuration error") != std::string::npos);
    CHECK(msg.find("f.cfg:1: unknown key 'bogus'") != std::string::npos);
    CHECK(msg.find("f.cfg:2: packets") != std::string::npos);
    CHECK(msg.find("f.cfg:3:") != std::string::npos);
    CHECK(msg.find("does not match") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_file(cfg, "/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("canonical text round-trips and hashes ignore seed and output") {
  ScenarioConfig a = defaults_for(Scenario::P2p5p2km);
  a.packets = 13;
  a.link.v_a = 12.5;
  ScenarioConfig b = defaults_for(Scenario::P2p5p2km);
  apply_text(b, canonical_text(a));
  CHECK(canonical_text(b) == canonical_text(a));
  CHECK(config_hash(b) == config_hash(a));

  b.seed = 999;
  b.output_dir = "elsewhere";
  CHECK(config_hash(b) == config_hash(a));
  b.packets = 14;
  CHECK(config_hash(b) != config_hash(a));
  CHECK(config_hash(defaults_for(Scenario::Loopback10p4km)) != config_hash(defaults_for(Scenario::P2p5p2km)));
}

TEST_CASE("seed precedence: config < environment < command line") {
  CHECK(resolve_seed(1, nullptr, std::nullopt) == 1);
  CHECK(resolve_seed(1, "", std::nullopt) == 1);
  CHECK(resolve_seed(1, "42", std::nullopt) == 42);
  CHECK(resolve_seed(1, "42", 7) == 7);
  CHECK_THROWS_AS(resolve_seed(1, "x1", std::nullopt), ConfigError);
}

TEST_CASE("invalid values fail validation") {
  ScenarioConfig cfg = defaults_for(Scenario::Loopback10p4km);
  apply_text(cfg, "detector.t_bob = 1.5\n");
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("reference page lists every key") {
  std::ostringstream out;
  write_reference_page(out);
  const std::string page = out.str();
  std::istringstream canon(canonical_text(defaults_for(Scenario::Loopback10p4km)));
  std::string line;
  std::getline(canon, line);  // scenario
  while (std::getline(canon, line)) {
    const std::string key = line.substr(0, line.find(' '));
    CHECK_MESSAGE(page.find("`" + key + "`") != std::string::npos, key);
  }
}
