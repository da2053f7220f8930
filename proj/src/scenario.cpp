#include "cvqkd/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "cvqkd/estimation.hpp"
#include "cvqkd/rng.hpp"
#include "cvqkd/security.hpp"
#include "cvqkd/sim.hpp"

namespace cvqkd::scenario {

using config::Scenario;
using config::ScenarioConfig;
using json = nlohmann::ordered_json;

bool RunReport::passed() const {
  return std::all_of(expectations.begin(), expectations.end(), [](const Expectation& e) { return e.passed; });
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  if (threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

/// Artifact writer: every file lands in the output directory and starts with
/// the config hash and seed.
class Artifacts {
 public:
  Artifacts(const ScenarioConfig& cfg, RunReport& report) : cfg_(cfg), report_(report) {
    dir_ = cfg.output_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw StageError("output", "cannot create '" + dir_.string() + "': " + ec.message());
  }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw StageError("output", "cannot write '" + (dir_ / name).string() + "'");
    out.precision(12);
    if (std::find(report_.artifacts.begin(), report_.artifacts.end(), name) == report_.artifacts.end()) {
      report_.artifacts.push_back(name);
    }
    return out;
  }

  std::ofstream open_csv(const std::string& name) {
    std::ofstream out = open(name);
    out << "# scenario=" << config::to_string(cfg_.scenario) << " config_hash=" << report_.config_hash
        << " seed=" << report_.seed << '\n';
    return out;
  }

  void write_json(const std::string& name, json body) {
    json j;
    j["scenario"] = config::to_string(cfg_.scenario);
    j["config_hash"] = report_.config_hash;
    j["seed"] = report_.seed;
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    std::ofstream out = open(name);
    out << j.dump(2) << '\n';
  }

 private:
  const ScenarioConfig& cfg_;
  RunReport& report_;
  std::filesystem::path dir_;
};

void expect(RunReport& rep, std::string name, bool passed, double value, double target, std::string detail) {
  rep.expectations.push_back({std::move(name), passed, value, target, std::move(detail)});
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::string config_json(const ScenarioConfig& cfg, const std::string& hash) {
  json j;
  j["config_hash"] = hash;
  std::istringstream lines(config::canonical_text(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j.dump();
}

double json_number(double v) { return std::isfinite(v) ? v : 0.0; }

// ------------------------------------------------------------ field links

struct VaRun {
  double v_a = 0.0;
  sim::LinkRunResult result;
};

void run_link_scenario(const ScenarioConfig& cfg, int jobs, Artifacts& art, RunReport& rep, json& results) {
  sim::LinkConfig link = cfg.link;
  link.packets = cfg.packets;
  const double t = link.channel.transmission();
  const double eta = link.receiver.detector.efficiency();
  const double nu_e = link.receiver.detector.nu_e;
  const double dphi = link.channel.phase_variance;

  sim::TimingConfig tc;
  tc.link = link;
  tc.clock_offset_ppm = cfg.timing.clock_offset_ppm;
  tc.periods = cfg.timing.periods;
  tc.lock_fraction = cfg.timing.lock_fraction;
  tc.trace_every = 100;

  sim::TimingResult timing;
  std::vector<VaRun> runs(cfg.va_grid.size());
  stage("link", [&] {
    parallel_for(runs.size() + 1, jobs, [&](std::size_t i) {
      if (i == 0) {
        timing = stage("timing", [&] { return sim::simulate_timing(tc, rng::derive_seed(rep.seed, 10)); });
        return;
      }
      const std::size_t k = i - 1;
      sim::LinkConfig l = link;
      l.v_a = cfg.va_grid[k];
      runs[k].v_a = l.v_a;
      runs[k].result = sim::run_link(l, rng::derive_seed(rep.seed, 20 + k), k == 0 ? 4096 : 0);
    });
    return 0;
  });

  // Timing lock.
  {
    auto out = art.open_csv("timing_trace.csv");
    out << "period,tau_ns,bin_phase_ns,locked,reference_z\n";
    for (const auto& p : timing.trace) {
      out << p.period << ',' << p.tau_ns << ',' << p.bin_phase_ns << ',' << (p.locked ? 1 : 0) << ',' << p.reference_z
          << '\n';
    }
    auto ev = art.open_csv("timing_events.csv");
    timing.log.write_csv(ev);
    const double lock = timing.lock_period ? static_cast<double>(*timing.lock_period) : -1.0;
    expect(rep, "timing_lock_acquired", timing.lock_period && *timing.lock_period < cfg.expect.lock_within_periods,
           lock, static_cast<double>(cfg.expect.lock_within_periods), "period of first lock");
    expect(rep, "timing_slew_limit", timing.max_slew_ns <= 1, timing.max_slew_ns, 1.0, "max LO phase step, ns");
    results["timing"] = {{"lock_period", lock},
                         {"max_slew_ns", timing.max_slew_ns},
                         {"locked_periods", timing.locked_periods},
                         {"periods_after_lock", timing.periods_after_lock},
                         {"final_tau_ns", timing.final_tau_ns}};
  }

  // Per-packet and per-V_A estimates.
  std::vector<estimation::PhaseNoisePoint> points;
  {
    auto pk = art.open_csv("packets.csv");
    pk << "v_a,packet,id,accepted,candidates,rejected_candidates,id_bit_errors,delta,true_delta,shot_variance,"
          "elec_variance,v_a_hat,xi,v_b\n";
    auto xn = art.open_csv("excess_noise.csv");
    xn << "v_a,v_a_hat,xi,xi_stderr,v_b,v_b_predicted,v_b_rel_error,k_hat,packets_accepted,packets,false_triggers,"
          "r_inf_bps\n";
    json per_va = json::array();
    for (const auto& run : runs) {
      const auto& r = run.result;
      for (std::size_t i = 0; i < r.packets.size(); ++i) {
        const auto& p = r.packets[i];
        pk << run.v_a << ',' << i << ',' << p.id << ',' << (p.accepted ? 1 : 0) << ',' << p.candidates << ','
           << p.rejected_candidates << ',' << p.id_bit_errors << ',' << p.delta.delta << ',' << p.true_delta << ','
           << p.calibration.shot_variance << ',' << p.calibration.elec_variance << ',' << p.estimate.v_a_hat << ','
           << p.estimate.xi_hat << ',' << p.estimate.v_b << '\n';
      }
      const auto& m = r.average.mean;
      const double predicted = estimation::predicted_v_b(run.v_a, run.v_a * dphi, t, eta, nu_e);
      const double rel = (m.v_b - predicted) / predicted;
      double r_inf = std::nan("");
      try {
        security::SecurityInput in{m.v_a_hat, t, std::max(0.0, m.xi_hat), eta, r.nu_e_calibrated,
                                   cfg.security.model.beta};
        r_inf = security::asymptotic_rate(in) * cfg.security.symbol_rate;
      } catch (const DomainError&) {
      }
      xn << run.v_a << ',' << m.v_a_hat << ',' << m.xi_hat << ',' << r.average.xi_stderr << ',' << m.v_b << ','
         << predicted << ',' << rel << ',' << m.k_hat << ',' << r.accepted << ',' << r.packets.size() << ','
         << r.false_triggers << ',' << r_inf << '\n';
      points.push_back({m.v_a_hat, m.xi_hat, r.average.xi_stderr});

      const double fraction = static_cast<double>(r.accepted) / static_cast<double>(r.packets.size());
      const std::string tag = "v_a=" + std::to_string(static_cast<int>(std::lround(run.v_a)));
      expect(rep, "packets_framed " + tag, fraction >= cfg.expect.min_accepted_fraction, fraction,
             cfg.expect.min_accepted_fraction, "fraction of packets framed and estimated");
      expect(rep, "v_b_closure " + tag, std::abs(rel) <= cfg.expect.vb_tolerance, rel, cfg.expect.vb_tolerance,
             "(V_B - predicted) / predicted");
      per_va.push_back({{"v_a", run.v_a},
                        {"v_a_hat", m.v_a_hat},
                        {"xi", m.xi_hat},
                        {"xi_stderr", r.average.xi_stderr},
                        {"v_b", m.v_b},
                        {"v_b_predicted", predicted},
                        {"nu_e_calibrated", r.nu_e_calibrated},
                        {"accepted", r.accepted},
                        {"false_triggers", r.false_triggers},
                        {"r_inf_bps", json_number(r_inf)}});
    }
    results["per_v_a"] = per_va;
  }

  const auto fit = stage("phase_noise_fit", [&] { return estimation::fit_phase_noise(points); });
  expect(rep, "delta_phi_slope", std::abs(fit.delta_phi - dphi) <= cfg.expect.delta_phi_tolerance, fit.delta_phi,
         dphi, "fitted xi / V_A slope vs configured phase noise, tolerance " +
                   std::to_string(cfg.expect.delta_phi_tolerance));
  results["phase_noise_fit"] = {{"delta_phi", fit.delta_phi},
                                {"stderr", fit.stderr},
                                {"configured", dphi},
                                {"transmission", t},
                                {"eta", eta}};

  if (!runs.empty()) {
    estimation::EstimationResult last = runs.back().result.average.mean;
    last.delta_phi_hat = fit.delta_phi;
    auto out = art.open("estimation.json");
    estimation::write_estimation_json(out, last, config_json(cfg, rep.config_hash), rep.seed);
    auto frames = art.open_csv("sample_frames.csv");
    rx::write_frames_csv(frames, runs.front().result.sample_frames);
  }
}

// -------------------------------------------------------- key-rate sweeps

security::FiniteSizeInput finite_input(const ScenarioConfig& cfg, std::uint64_t n_total) {
  security::FiniteSizeInput fs = security::FiniteSizeInput::half_split(n_total);
  fs.z_conf = cfg.security.z_conf;
  fs.eps_bar = cfg.security.eps_bar;
  fs.eps_pe = cfg.security.eps_pe;
  fs.symbol_rate = cfg.security.symbol_rate;
  return fs;
}

std::optional<double> fixed_va(const ScenarioConfig& cfg) {
  if (cfg.security.fixed_va > 0.0) return cfg.security.fixed_va;
  return std::nullopt;
}

void run_distance_sweep(const ScenarioConfig& cfg, int jobs, Artifacts& art, RunReport& rep, json& results) {
  const auto grid = security::va_grid(cfg.security.va_min, cfg.security.va_max, cfg.security.va_step);
  std::optional<security::FiniteSizeInput> fs;
  if (cfg.security.finite_n > 0) fs = finite_input(cfg, cfg.security.finite_n);
  const auto& d = cfg.security.distances_km;
  std::vector<security::SweepRow> rows(d.size());
  stage("sweep", [&] {
    parallel_for(d.size(), jobs, [&](std::size_t i) {
      const double di = d[i];
      rows[i] = security::distance_sweep(std::span(&di, 1), cfg.security.model, grid, fs, fixed_va(cfg),
                                         cfg.security.symbol_rate)
                    .front();
    });
    return 0;
  });
  {
    auto out = art.open_csv("sweep.csv");
    security::write_sweep_csv(out, rows);
  }
  {
    std::ostringstream ss;
    security::write_sweep_json(ss, rows);
    art.write_json("sweep.json", json{{"rows", json::parse(ss.str())}});
  }

  bool monotone = true;
  bool bounded = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && d[i] > d[i - 1] && rows[i].r_inf_bps > rows[i - 1].r_inf_bps + 1e-9) monotone = false;
    if (fs && rows[i].r_fs_bps > 0.5 * rows[i].r_inf_bps + 1e-9) bounded = false;
  }
  expect(rep, "asymptotic_rate_nonincreasing", monotone, monotone ? 1.0 : 0.0, 1.0,
         "optimized asymptotic rate never grows with distance");
  if (fs) {
    expect(rep, "finite_size_below_asymptotic", bounded, bounded ? 1.0 : 0.0, 1.0,
           "finite-size rate at most half the asymptotic rate");
  }
  double reach = 0.0;
  for (const auto& r : rows) {
    if (r.r_inf_bps > 0.0) reach = std::max(reach, r.distance_km);
  }
  results["max_distance_with_positive_asymptotic_rate_km"] = reach;
  results["rows"] = rows.size();
}

void run_table1(const ScenarioConfig& cfg, int jobs, Artifacts& art, RunReport& rep, json& results) {
  const auto grid = security::va_grid(cfg.security.va_min, cfg.security.va_max, cfg.security.va_step);
  const auto& d = cfg.security.distances_km;
  struct Row {
    std::uint64_t n_total = 0;
    double v_a = 0.0;
    double kbps = 0.0;
    security::FiniteSizeResult detail;
    std::vector<std::pair<double, double>> curve;  ///< (N, kbps)
    double half_asymptotic_kbps = 0.0;
    double constant_kbps = 0.0;
  };
  std::vector<Row> rows(d.size());
  constexpr int kCurvePoints = 17;
  stage("table1", [&] {
    parallel_for(d.size(), jobs, [&](std::size_t i) {
      Row& row = rows[i];
      row.n_total = static_cast<std::uint64_t>(std::llround(cfg.security.hours[i] * 3600.0 * cfg.security.symbol_rate));
      const auto fs = finite_input(cfg, row.n_total);
      row.v_a = fixed_va(cfg).value_or(security::optimize_va(grid, cfg.security.model, d[i], fs).v_a);
      row.detail = security::finite_size_rate(cfg.security.model.at(d[i], row.v_a), fs);
      row.kbps = row.detail.rate * cfg.security.symbol_rate / 1e3;
      const double constant_rate =
          security::finite_size_rate(cfg.security.model.at(d[i], cfg.security.constant_va), fs).rate;
      row.constant_kbps = constant_rate * cfg.security.symbol_rate / 1e3;
      const auto asym = security::optimize_va(grid, cfg.security.model, d[i], std::nullopt);
      row.half_asymptotic_kbps = 0.5 * asym.rate * cfg.security.symbol_rate / 1e3;
      for (int k = 0; k < kCurvePoints; ++k) {
        const double n = std::pow(10.0, 8.0 + 0.25 * k);
        const auto fk = finite_input(cfg, static_cast<std::uint64_t>(n));
        const auto opt = security::optimize_va(grid, cfg.security.model, d[i], fk);
        row.curve.emplace_back(n, opt.rate * cfg.security.symbol_rate / 1e3);
      }
    });
    return 0;
  });

  auto out = art.open_csv("table1.csv");
  out << "distance_km,hours,n_total,v_a,r_fs_kbps,reference_kbps,rel_error,within_tolerance,i_ab,chi_be_max,"
         "delta_n,t_min,sigma2_max,constant_va,r_fs_constant_va_kbps\n";
  json arr = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const double ref = cfg.expect.table1_kbps[i];
    const double rel = (r.kbps - ref) / ref;
    const bool ok = std::abs(rel) <= cfg.expect.table1_tolerance;
    out << d[i] << ',' << cfg.security.hours[i] << ',' << r.n_total << ',' << r.v_a << ',' << r.kbps << ',' << ref
        << ',' << rel << ',' << (ok ? 1 : 0) << ',' << r.detail.i_ab << ',' << r.detail.chi_be_max << ','
        << r.detail.delta_n << ',' << r.detail.t_min << ',' << r.detail.sigma2_max << ',' << cfg.security.constant_va
        << ',' << r.constant_kbps << '\n';
    std::ostringstream name;
    name << "table1 d=" << d[i] << "km";
    expect(rep, name.str(), ok, r.kbps, ref, "finite-size key rate, kbps");
    arr.push_back({{"distance_km", d[i]}, {"v_a", r.v_a}, {"r_fs_kbps", r.kbps}, {"reference_kbps", ref},
                   {"constant_va", cfg.security.constant_va}, {"r_fs_constant_va_kbps", r.constant_kbps}});
  }
  results["rows"] = arr;

  auto curves = art.open_csv("finite_size_curves.csv");
  curves << "distance_km,n_total,r_fs_kbps,half_asymptotic_kbps\n";
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].curve.size(); ++k) {
      const auto& [n, kbps] = rows[i].curve[k];
      curves << d[i] << ',' << n << ',' << kbps << ',' << rows[i].half_asymptotic_kbps << '\n';
      if (k > 0 && kbps < rows[i].curve[k - 1].second - 1e-12) monotone = false;
    }
  }
  expect(rep, "finite_size_monotone_in_n", monotone, monotone ? 1.0 : 0.0, 1.0,
         "optimized finite-size rate non-decreasing in N for every distance");
}

// ------------------------------------------------------------ pol_24h

void run_pol(const ScenarioConfig& cfg, int jobs, Artifacts& art, RunReport& rep, json& results) {
  std::array<sim::PolDriftResult, 2> res;
  stage("pol_drift", [&] {
    parallel_for(2, jobs, [&](std::size_t i) {
      sim::PolDriftConfig pc;
      pc.link = cfg.link;
      pc.link.packets = cfg.packets;
      pc.duration_s = cfg.pol.duration_s;
      pc.interval_s = cfg.pol.interval_s;
      pc.correction = i == 0;
      pc.actuators.rad_per_volt = cfg.pol.rad_per_volt;
      pc.step_volts = cfg.pol.step_volts;
      pc.window_frames = cfg.pol.window_frames;
      res[i] = sim::simulate_pol_drift(pc, rng::derive_seed(rep.seed, 40));
    });
    return 0;
  });
  const auto& on = res[0];
  const auto& off = res[1];
  auto out = art.open_csv("pol_trace.csv");
  out << "time_s,photons_corrected,cycles_corrected,photons_uncorrected,cycles_uncorrected\n";
  for (std::size_t i = 0; i < std::min(on.trace.size(), off.trace.size()); ++i) {
    out << on.trace[i].time_s << ',' << on.trace[i].photons << ',' << on.trace[i].cycle_count << ','
        << off.trace[i].photons << ',' << off.trace[i].cycle_count << '\n';
  }
  auto ev = art.open_csv("pol_events.csv");
  on.log.write_csv(ev);

  const double nominal = on.nominal_photons;
  const double on_ratio = on.mean_photons / nominal;
  const double off_final = off.final_hour_photons / nominal;
  expect(rep, "pol_corrected_mean", std::abs(on_ratio - 1.0) <= cfg.expect.pol_band, on_ratio, 1.0,
         "corrected mean photons over nominal");
  expect(rep, "pol_uncorrected_fade", off_final < 1.0 - cfg.expect.pol_fade, off_final, 1.0 - cfg.expect.pol_fade,
         "uncorrected final-hour photons over nominal");
  auto summary = [&](const sim::PolDriftResult& r) {
    return json{{"mean_photons", r.mean_photons},
                {"final_hour_photons", r.final_hour_photons},
                {"variance", r.variance},
                {"short_term_variance", r.short_term_variance},
                {"accepted_steps", r.accepted_steps},
                {"rejected_steps", r.rejected_steps}};
  };
  results["nominal_photons"] = nominal;
  results["corrected"] = summary(on);
  results["uncorrected"] = summary(off);
}

// --------------------------------------------------------- shot noise

void run_shot_noise(const ScenarioConfig& cfg, int, Artifacts& art, RunReport& rep, json& results) {
  const auto sweep = stage("shot_noise", [&] {
    return sim::shot_noise_sweep(cfg.link, cfg.shot_noise.lo_powers, cfg.shot_noise.frames,
                                 rng::derive_seed(rep.seed, 50));
  });
  auto out = art.open_csv("shot_noise.csv");
  out << "lo_power_uw,shot_variance,elec_variance,nu_e,frames\n";
  for (const auto& p : sweep.points) {
    out << p.lo_power << ',' << p.calibration.shot_variance << ',' << p.calibration.elec_variance << ','
        << p.calibration.nu_e() << ',' << p.calibration.frames << '\n';
  }
  const auto count = static_cast<double>(sweep.points.size());
  expect(rep, "shot_noise_points", sweep.points.size() >= cfg.expect.shot_noise_min_points, count,
         static_cast<double>(cfg.expect.shot_noise_min_points), "LO powers calibrated");
  expect(rep, "shot_noise_linearity", sweep.r_squared >= cfg.expect.shot_noise_r2, sweep.r_squared,
         cfg.expect.shot_noise_r2, "R^2 of shot variance vs LO power");
  results["fit"] = {{"slope", sweep.slope}, {"intercept", sweep.intercept}, {"r_squared", sweep.r_squared}};
}

}  // namespace

RunReport run(const ScenarioConfig& cfg, int jobs) {
  stage("config", [&] {
    cfg.validate();
    return 0;
  });
  RunReport rep;
  rep.scenario = cfg.scenario;
  rep.config_hash = config::hash_hex(config::config_hash(cfg));
  rep.seed = cfg.seed;
  Artifacts art(cfg, rep);
  {
    auto out = art.open("config.txt");
    out << "# config_hash=" << rep.config_hash << " seed=" << rep.seed << '\n' << config::canonical_text(cfg);
  }

  json results = json::object();
  switch (cfg.scenario) {
    case Scenario::Loopback10p4km:
    case Scenario::P2p5p2km: run_link_scenario(cfg, jobs, art, rep, results); break;
    case Scenario::DistanceSweep: run_distance_sweep(cfg, jobs, art, rep, results); break;
    case Scenario::Table1: run_table1(cfg, jobs, art, rep, results); break;
    case Scenario::Pol24h: run_pol(cfg, jobs, art, rep, results); break;
    case Scenario::ShotNoiseSweep: run_shot_noise(cfg, jobs, art, rep, results); break;
  }

  json exp = json::array();
  for (const auto& e : rep.expectations) {
    exp.push_back({{"name", e.name},
                   {"passed", e.passed},
                   {"value", json_number(e.value)},
                   {"target", json_number(e.target)},
                   {"detail", e.detail}});
  }
  json summary;
  summary["passed"] = rep.passed();
  summary["expectations"] = exp;
  summary["artifacts"] = rep.artifacts;
  summary["results"] = results;
  art.write_json("summary.json", summary);
  return rep;
}

}  // namespace cvqkd::scenario
