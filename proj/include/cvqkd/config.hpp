#pragma once

// Scenario configuration: plain-text `key = value` files with dotted section
// names, per-scenario presets, a canonical dump and its FNV-1a hash.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvqkd/security.hpp"
#include "cvqkd/sim.hpp"

namespace cvqkd::config {

enum class Scenario { Loopback10p4km, P2p5p2km, DistanceSweep, Pol24h, ShotNoiseSweep, Table1 };

const char* to_string(Scenario s);
/// Throws ConfigError for an unknown name.
Scenario parse_scenario(std::string_view name);
std::span<const Scenario> all_scenarios();

struct TimingSettings {
  double clock_offset_ppm = 20.0;
  std::size_t periods = 200000;
  double lock_fraction = 0.25;
};

struct PolSettings {
  double duration_s = 86400.0;
  double interval_s = 10.0;
  double step_volts = 0.2;
  int window_frames = 64;
  double rad_per_volt = 0.1;
};

struct ShotNoiseSettings {
  std::vector<double> lo_powers{2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0};  ///< uW
  std::size_t frames = 20000;
};

struct SecuritySettings {
  security::LinkModel model;
  double symbol_rate = 5.0e4;
  double z_conf = 6.5;
  double eps_bar = 1e-10;
  double eps_pe = 1e-10;
  std::vector<double> distances_km{10.0, 20.0, 30.0, 40.0};
  /// Data-collection time per distance for table1, hours.
  std::vector<double> hours{5.0, 20.8, 80.0, 302.0};
  double va_min = 0.05;
  double va_max = 10.0;
  double va_step = 0.05;
  double fixed_va = 0.0;        ///< 0: optimize V_A per distance
  double constant_va = 1.0;     ///< table1 comparison column at constant V_A
  std::uint64_t finite_n = 0;   ///< distance_sweep block size, 0: asymptotic only
};

struct Expectations {
  double delta_phi_tolerance = 0.004;
  double vb_tolerance = 0.03;
  double min_accepted_fraction = 0.95;
  std::size_t lock_within_periods = 1000000;
  double table1_tolerance = 0.15;
  std::vector<double> table1_kbps{1.6, 0.74, 0.38, 0.20};
  double shot_noise_r2 = 0.99;
  std::size_t shot_noise_min_points = 8;
  double pol_band = 0.15;
  double pol_fade = 0.20;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::Loopback10p4km;
  sim::LinkConfig link;
  std::size_t packets = 100;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  /// Modulation variances for the excess-noise sweep, SNU.
  std::vector<double> va_grid{5.0, 10.0, 15.0, 20.0, 25.0};
  TimingSettings timing;
  PolSettings pol;
  ShotNoiseSettings shot_noise;
  SecuritySettings security;
  Expectations expect;

  /// Throws ConfigError.
  void validate() const;
};

/// Scenario preset: link geometry and phase noise for the two field links.
ScenarioConfig defaults_for(Scenario s);

/// Applies `key = value` lines; `[section]` lines prefix the keys that
/// follow. Collects every unknown key, malformed line and bad value, then
/// throws one ConfigError listing all of them.
void apply_text(ScenarioConfig& cfg, std::string_view text, std::string_view source = "<config>");
void apply_file(ScenarioConfig& cfg, const std::string& path);

/// Every key in registry order, one `key = value` line each.
std::string canonical_text(const ScenarioConfig& cfg);

std::uint64_t fnv1a64(std::string_view data);
/// Hash of the canonical text without seed and output_dir.
std::uint64_t config_hash(const ScenarioConfig& cfg);
std::string hash_hex(std::uint64_t h);

/// config seed < CVQKD_LAB_SEED (env_value) < --seed.
std::uint64_t resolve_seed(std::uint64_t config_seed, const char* env_value, std::optional<std::uint64_t> cli_seed);

/// Markdown reference page: every key with type, default and meaning, plus
/// the per-scenario presets.
void write_reference_page(std::ostream& out);

}  // namespace cvqkd::config
