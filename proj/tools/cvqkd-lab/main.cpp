// cvqkd-lab: scenario runner, key-rate calculator and self test.
//
// Exit codes: 0 success, 1 an expectation or acceptance criterion failed,
// 2 invalid configuration or usage, 3 a scenario stage failed.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "acceptance.hpp"
#include "cvqkd/config.hpp"
#include "cvqkd/error.hpp"
#include "cvqkd/scenario.hpp"
#include "cvqkd/security.hpp"

namespace {

using namespace cvqkd;

int default_jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

int cmd_run(const std::string& scenario_name, const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir, int jobs) {
  const auto scenario = config::parse_scenario(scenario_name);
  config::ScenarioConfig cfg = config::defaults_for(scenario);
  if (!config_path.empty()) config::apply_file(cfg, config_path);
  cfg.seed = config::resolve_seed(cfg.seed, std::getenv("CVQKD_LAB_SEED"), seed);
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  const auto t0 = std::chrono::steady_clock::now();
  const auto report = scenario::run(cfg, jobs);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::cout << "scenario " << config::to_string(report.scenario) << " config_hash " << report.config_hash << " seed "
            << report.seed << "\n";
  for (const auto& e : report.expectations) {
    std::cout << (e.passed ? "  PASS " : "  FAIL ") << e.name << ": " << e.value << " (target " << e.target << ", "
              << e.detail << ")\n";
  }
  std::cout << "artifacts in " << cfg.output_dir << ":";
  for (const auto& a : report.artifacts) std::cout << ' ' << a;
  std::cout << "\n" << std::fixed << std::setprecision(1) << "elapsed " << seconds << " s\n";
  return report.passed() ? 0 : 1;
}

struct KeyrateArgs {
  double distance_km = 10.0;
  double v_a = 2.0;
  std::optional<std::uint64_t> finite_n;
  std::optional<std::uint64_t> finite_m;
  std::optional<double> xi;
  std::string config_path;
  bool json = false;
};

int cmd_keyrate(const KeyrateArgs& a) {
  config::ScenarioConfig cfg = config::defaults_for(config::Scenario::DistanceSweep);
  if (!a.config_path.empty()) config::apply_file(cfg, a.config_path);
  security::LinkModel model = cfg.security.model;
  if (a.xi) {
    model.phase_noise_mode = false;
    model.xi_fixed = *a.xi;
  }
  const security::SecurityInput in = model.at(a.distance_km, a.v_a);
  const auto h = security::holevo_bound(in);
  const double i_ab = security::mutual_information(in);
  const double r_inf = security::asymptotic_rate(in);
  const double rate = cfg.security.symbol_rate;

  nlohmann::ordered_json j;
  j["distance_km"] = a.distance_km;
  j["v_a"] = a.v_a;
  j["t"] = in.t;
  j["xi"] = in.xi;
  j["eta"] = in.eta;
  j["nu_el"] = in.nu_el;
  j["beta"] = in.beta;
  j["i_ab"] = i_ab;
  j["lambda"] = h.lambda;
  j["chi_be"] = h.chi_be;
  j["r_inf_bits_per_symbol"] = r_inf;
  j["r_inf_bps"] = r_inf * rate;
  if (a.finite_n || a.finite_m) {
    if (!a.finite_n || !a.finite_m) throw ConfigError("--finite-n and --finite-m go together");
    security::FiniteSizeInput fs;
    fs.n_key = *a.finite_n;
    fs.m_est = *a.finite_m;
    fs.z_conf = cfg.security.z_conf;
    fs.eps_bar = cfg.security.eps_bar;
    fs.eps_pe = cfg.security.eps_pe;
    const auto f = security::finite_size_rate(in, fs);
    j["finite"] = {{"n", fs.n_key},
                   {"m", fs.m_est},
                   {"estimation_failed", f.estimation_failed},
                   {"t_min", f.t_min},
                   {"sigma2_max", f.sigma2_max},
                   {"xi_max", f.xi_max},
                   {"chi_be_max", f.chi_be_max},
                   {"delta_n", f.delta_n},
                   {"r_fs_bits_per_symbol", f.rate},
                   {"r_fs_bps", f.rate * rate}};
  }
  if (a.json) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << std::setprecision(6);
  std::cout << "T " << in.t << "  xi " << in.xi << "  eta " << in.eta << "  nu_el " << in.nu_el << "  beta " << in.beta
            << "\n";
  std::cout << "I_AB " << i_ab << "  chi_BE " << h.chi_be << "  lambda";
  for (int i = 0; i < 4; ++i) std::cout << ' ' << h.lambda[i];
  std::cout << "\nasymptotic " << r_inf << " bits/symbol = " << r_inf * rate << " bps\n";
  if (j.contains("finite")) {
    const auto& f = j["finite"];
    if (f["estimation_failed"].get<bool>()) {
      std::cout << "finite size: parameter estimation bound failed (T_min <= 0)\n";
    } else {
      std::cout << "finite size: T_min " << f["t_min"].get<double>() << "  sigma2_max "
                << f["sigma2_max"].get<double>() << "  delta(n) " << f["delta_n"].get<double>() << "  rate "
                << f["r_fs_bits_per_symbol"].get<double>() << " bits/symbol = " << f["r_fs_bps"].get<double>()
                << " bps\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvqkd-lab: true local oscillator CV-QKD simulator and key-rate calculator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario and write its artifacts");
  std::string scenario_name, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = default_jobs();
  run->add_option("scenario", scenario_name,
                  "loopback_10p4km | p2p_5p2km | distance_sweep | pol_24h | shot_noise_sweep | table1")
      ->required();
  run->add_option("--config", config_path, "key = value configuration file");
  run->add_option("--seed", seed, "master seed (overrides CVQKD_LAB_SEED and the config)");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "worker threads for independent sweep points")->check(CLI::PositiveNumber);

  auto* keyrate = app.add_subcommand("keyrate", "asymptotic and finite-size key rate at one operating point");
  KeyrateArgs kr;
  keyrate->add_option("--distance-km", kr.distance_km, "fiber length, km")->required();
  keyrate->add_option("--va", kr.v_a, "modulation variance, SNU")->required();
  keyrate->add_option("--finite-n", kr.finite_n, "key symbols n");
  keyrate->add_option("--finite-m", kr.finite_m, "estimation symbols m");
  keyrate->add_option("--xi", kr.xi, "fixed excess noise, SNU (default V_A * delta_phi)");
  keyrate->add_option("--config", kr.config_path, "configuration file for security.* parameters");
  keyrate->add_flag("--json", kr.json, "print JSON");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  acceptance::Options options;
  options.jobs = default_jobs();
  selftest->add_option("--only", options.only, "criterion numbers")->check(CLI::Range(1, acceptance::kCriterionCount));
  selftest->add_option("--jobs", options.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* defaults = app.add_subcommand("defaults", "print the configuration reference or a scenario's full config");
  std::string defaults_scenario;
  defaults->add_option("--scenario", defaults_scenario, "print this scenario's effective configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario_name, config_path, seed, out_dir, jobs);
    if (*keyrate) return cmd_keyrate(kr);
    if (*selftest) {
      const auto results = acceptance::run_all(options, std::cout);
      for (const auto& r : results) {
        if (!r.passed) return 1;
      }
      return 0;
    }
    if (*defaults) {
      if (defaults_scenario.empty()) {
        config::write_reference_page(std::cout);
      } else {
        std::cout << config::canonical_text(config::defaults_for(config::parse_scenario(defaults_scenario)));
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const scenario::StageError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
