#include "cvqkd/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "cvqkd/error.hpp"

namespace cvqkd::config {

namespace {

constexpr std::array<Scenario, 6> kScenarios{Scenario::Loopback10p4km, Scenario::P2p5p2km,
                                             Scenario::DistanceSweep,  Scenario::Pol24h,
                                             Scenario::ShotNoiseSweep, Scenario::Table1};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// ------------------------------------------------------------ value codecs

std::string format_value(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}
std::string format_value(bool v) { return v ? "true" : "false"; }
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(std::size_t v) { return std::to_string(v); }
std::string format_value(const std::string& v) { return v; }
std::string format_value(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_value(v[i]);
  }
  return out;
}

template <class T>
T parse_number(std::string_view s) {
  s = trim(s);
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

template <class T>
T parse_value(std::string_view s);

template <>
double parse_value<double>(std::string_view s) {
  return parse_number<double>(s);
}
template <>
int parse_value<int>(std::string_view s) {
  return parse_number<int>(s);
}
template <>
std::size_t parse_value<std::size_t>(std::string_view s) {
  return parse_number<std::size_t>(s);
}
template <>
bool parse_value<bool>(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + std::string(s) + "'");
}
template <>
std::string parse_value<std::string>(std::string_view s) {
  return std::string(trim(s));
}
template <>
std::vector<double> parse_value<std::vector<double>>(std::string_view s) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto item = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_number<double>(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, double>) return "real";
  if constexpr (std::is_same_v<T, bool>) return "bool";
  if constexpr (std::is_same_v<T, int>) return "integer";
  if constexpr (std::is_same_v<T, std::size_t>) return "unsigned";
  if constexpr (std::is_same_v<T, std::string>) return "string";
  if constexpr (std::is_same_v<T, std::vector<double>>) return "real list";
  return "?";
}

// --------------------------------------------------------------- registry

struct Field {
  std::string key;
  const char* type = "";
  std::string help;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, std::string_view)> set;
};

template <class Access>
Field bind(std::string key, std::string help, Access access) {
  using T = std::remove_reference_t<std::invoke_result_t<Access, ScenarioConfig&>>;
  Field f;
  f.key = std::move(key);
  f.type = type_name<T>();
  f.help = std::move(help);
  f.get = [access](const ScenarioConfig& c) { return format_value(access(const_cast<ScenarioConfig&>(c))); };
  f.set = [access](ScenarioConfig& c, std::string_view v) { access(c) = parse_value<T>(v); };
  return f;
}

#define CVQKD_FIELD(key, help, expr) bind(key, help, [](ScenarioConfig& c) -> auto& { return expr; })

std::vector<Field> build_registry() {
  std::vector<Field> r;
  r.push_back(CVQKD_FIELD("seed", "master seed; CVQKD_LAB_SEED and --seed override it", c.seed));
  r.push_back(CVQKD_FIELD("packets", "packets per modulation variance", c.packets));
  r.push_back(CVQKD_FIELD("output_dir", "artifact directory; --out overrides it", c.output_dir));

  r.push_back(CVQKD_FIELD("alice.v_a", "modulation variance of single link runs, SNU", c.link.v_a));
  r.push_back(CVQKD_FIELD("alice.digital_sigma", "std dev of Alice's digital Gaussian values", c.link.digital_sigma));
  r.push_back(CVQKD_FIELD("alice.va_grid", "modulation variances of the excess-noise sweep, SNU", c.va_grid));

  r.push_back(CVQKD_FIELD("tx.reference_photons", "reference pulse photons at Alice", c.link.tx.reference_photons));
  r.push_back(CVQKD_FIELD("tx.header_photons", "header/footer pattern photons at Alice", c.link.tx.header_photons));
  r.push_back(CVQKD_FIELD("tx.marker_factor", "packet marker brightness over a reference pulse", c.link.tx.marker_factor));
  r.push_back(CVQKD_FIELD("tx.pulse_width_ns", "pulse width, ns", c.link.tx.pulse_width_ns));
  r.push_back(CVQKD_FIELD("tx.period_ns", "pulse period, ns", c.link.tx.period_ns));
  r.push_back(CVQKD_FIELD("tx.signal_reference_gap_ns", "signal to reference spacing, ns", c.link.tx.signal_reference_gap_ns));
  r.push_back(CVQKD_FIELD("tx.extinction_db", "amplitude modulator extinction ratio, dB", c.link.extinction_db));

  r.push_back(CVQKD_FIELD("channel.distance_km", "fiber length, km", c.link.channel.distance_km));
  r.push_back(CVQKD_FIELD("channel.atten_db_per_km", "fiber attenuation, dB/km", c.link.channel.atten_db_per_km));
  r.push_back(CVQKD_FIELD("channel.fixed_loss_db", "connector and splice loss, dB", c.link.channel.fixed_loss_db));
  r.push_back(CVQKD_FIELD("channel.phase_variance", "residual phase noise variance, rad^2", c.link.channel.phase_variance));
  r.push_back(CVQKD_FIELD("channel.phase_variance_is_total",
                          "phase_variance includes the reference measurement noise", c.link.phase_variance_is_total));
  r.push_back(CVQKD_FIELD("channel.carrier_diffusion", "carrier phase diffusion, rad^2/s", c.link.channel.carrier_diffusion));
  r.push_back(CVQKD_FIELD("channel.delta_drift_rate", "signal/reference phase drift, rad/s", c.link.channel.delta_drift_rate));
  r.push_back(CVQKD_FIELD("channel.delta_diffusion", "signal/reference phase diffusion, rad^2/s", c.link.channel.delta_diffusion));
  r.push_back(CVQKD_FIELD("channel.pol_drift_rate", "birefringence drift, rad/s", c.link.channel.pol_drift_rate));
  r.push_back(CVQKD_FIELD("channel.pol_diffusion", "birefringence diffusion, rad^2/s", c.link.channel.pol_diffusion));

  r.push_back(CVQKD_FIELD("detector.eta_det", "photodiode quantum efficiency", c.link.receiver.detector.eta_det));
  r.push_back(CVQKD_FIELD("detector.t_bob", "receiver optics transmission", c.link.receiver.detector.t_bob));
  r.push_back(CVQKD_FIELD("detector.nu_e", "electrical noise per quadrature, SNU", c.link.receiver.detector.nu_e));

  r.push_back(CVQKD_FIELD("receiver.lo_power", "LO power, uW", c.link.receiver.lo.lo_power));
  r.push_back(CVQKD_FIELD("receiver.lo_power_nominal", "LO power at which counts_per_snu holds, uW",
                          c.link.receiver.lo.lo_power_nominal));
  r.push_back(CVQKD_FIELD("receiver.counts_per_snu", "ADC counts per shot-noise std dev", c.link.receiver.counts_per_snu));
  r.push_back(CVQKD_FIELD("receiver.noise_enabled", "shot and electrical noise on", c.link.receiver.noise_enabled));
  r.push_back(CVQKD_FIELD("receiver.adc_noise_counts", "extra ADC noise, counts rms", c.link.receiver.adc_noise_counts));
  r.push_back(CVQKD_FIELD("receiver.trusted_calibration", "use nominal shot noise instead of measuring it",
                          c.link.receiver.trusted_calibration));

  r.push_back(CVQKD_FIELD("bias.alpha0", "x-channel bias, counts", c.link.receiver.bias.alpha0));
  r.push_back(CVQKD_FIELD("bias.beta0", "p-channel bias, counts", c.link.receiver.bias.beta0));
  r.push_back(CVQKD_FIELD("bias.alpha_rate", "x-channel bias drift, counts/s", c.link.receiver.bias.alpha_rate));
  r.push_back(CVQKD_FIELD("bias.beta_rate", "p-channel bias drift, counts/s", c.link.receiver.bias.beta_rate));
  r.push_back(CVQKD_FIELD("bias.wander_amplitude", "sinusoidal bias wander, counts", c.link.receiver.bias.wander_amplitude));
  r.push_back(CVQKD_FIELD("bias.wander_period_s", "bias wander period, s", c.link.receiver.bias.wander_period_s));

  r.push_back(CVQKD_FIELD("framing.trigger_factor", "marker trigger over the rolling mean", c.link.detector.trigger_factor));
  r.push_back(CVQKD_FIELD("framing.mean_window", "rolling mean window, frames", c.link.detector.mean_window));
  r.push_back(CVQKD_FIELD("framing.warmup_frames", "frames averaged before triggering", c.link.detector.warmup_frames));
  r.push_back(CVQKD_FIELD("framing.delta_threshold", "minimum header/footer correlation", c.link.delta_threshold));
  r.push_back(CVQKD_FIELD("framing.id_hamming_tolerance", "packet ID bit errors tolerated", c.link.id_hamming_tolerance));
  r.push_back(CVQKD_FIELD("framing.idle_frames", "idle periods before each packet", c.link.idle_frames));
  r.push_back(CVQKD_FIELD("framing.trailing_frames", "idle periods after each packet", c.link.trailing_frames));
  r.push_back(CVQKD_FIELD("framing.dark_frames", "LO-off frames for the electrical noise", c.link.dark_frames));

  r.push_back(CVQKD_FIELD("timing.clock_offset_ppm", "Alice/Bob clock offset, ppm", c.timing.clock_offset_ppm));
  r.push_back(CVQKD_FIELD("timing.periods", "periods simulated for lock acquisition", c.timing.periods));
  r.push_back(CVQKD_FIELD("timing.lock_fraction", "lock threshold over nominal reference Z", c.timing.lock_fraction));

  r.push_back(CVQKD_FIELD("pol.duration_s", "drift run length, s", c.pol.duration_s));
  r.push_back(CVQKD_FIELD("pol.interval_s", "time between control steps, s", c.pol.interval_s));
  r.push_back(CVQKD_FIELD("pol.step_volts", "actuator step, V", c.pol.step_volts));
  r.push_back(CVQKD_FIELD("pol.window_frames", "reference frames per measurement", c.pol.window_frames));
  r.push_back(CVQKD_FIELD("pol.rad_per_volt", "actuator retardance per volt, rad/V", c.pol.rad_per_volt));

  r.push_back(CVQKD_FIELD("shot_noise.lo_powers", "LO powers of the calibration sweep, uW", c.shot_noise.lo_powers));
  r.push_back(CVQKD_FIELD("shot_noise.frames", "lit and dark frames per LO power", c.shot_noise.frames));

  r.push_back(CVQKD_FIELD("security.eta", "detection efficiency", c.security.model.eta));
  r.push_back(CVQKD_FIELD("security.nu_el", "electrical noise, SNU", c.security.model.nu_el));
  r.push_back(CVQKD_FIELD("security.beta", "reconciliation efficiency", c.security.model.beta));
  r.push_back(CVQKD_FIELD("security.atten_db_per_km", "fiber attenuation, dB/km", c.security.model.atten_db_per_km));
  r.push_back(CVQKD_FIELD("security.delta_phi", "phase noise variance, xi = V_A * delta_phi", c.security.model.delta_phi));
  r.push_back(CVQKD_FIELD("security.phase_noise_mode", "xi from delta_phi (true) or xi_fixed", c.security.model.phase_noise_mode));
  r.push_back(CVQKD_FIELD("security.xi_fixed", "excess noise when phase_noise_mode is false, SNU", c.security.model.xi_fixed));
  r.push_back(CVQKD_FIELD("security.symbol_rate", "symbols per second", c.security.symbol_rate));
  r.push_back(CVQKD_FIELD("security.z_conf", "confidence parameter of the estimation bounds", c.security.z_conf));
  r.push_back(CVQKD_FIELD("security.eps_bar", "smoothing parameter", c.security.eps_bar));
  r.push_back(CVQKD_FIELD("security.eps_pe", "parameter estimation failure probability", c.security.eps_pe));
  r.push_back(CVQKD_FIELD("security.distances_km", "sweep distances, km", c.security.distances_km));
  r.push_back(CVQKD_FIELD("security.hours", "table1 collection time per distance, h", c.security.hours));
  r.push_back(CVQKD_FIELD("security.va_min", "V_A search lower bound", c.security.va_min));
  r.push_back(CVQKD_FIELD("security.va_max", "V_A search upper bound", c.security.va_max));
  r.push_back(CVQKD_FIELD("security.va_step", "V_A search grid step", c.security.va_step));
  r.push_back(CVQKD_FIELD("security.fixed_va", "fixed V_A; 0 optimizes per distance", c.security.fixed_va));
  r.push_back(CVQKD_FIELD("security.constant_va", "table1 comparison V_A held constant", c.security.constant_va));
  r.push_back(CVQKD_FIELD("security.finite_n", "distance_sweep total symbols N; 0 skips finite size", c.security.finite_n));

  r.push_back(CVQKD_FIELD("expect.delta_phi_tolerance", "allowed |fitted - configured| phase noise", c.expect.delta_phi_tolerance));
  r.push_back(CVQKD_FIELD("expect.vb_tolerance", "allowed relative V_B error", c.expect.vb_tolerance));
  r.push_back(CVQKD_FIELD("expect.min_accepted_fraction", "packets that must be framed", c.expect.min_accepted_fraction));
  r.push_back(CVQKD_FIELD("expect.lock_within_periods", "timing lock deadline, periods", c.expect.lock_within_periods));
  r.push_back(CVQKD_FIELD("expect.table1_tolerance", "allowed relative key rate error", c.expect.table1_tolerance));
  r.push_back(CVQKD_FIELD("expect.table1_kbps", "published key rates, kbps", c.expect.table1_kbps));
  r.push_back(CVQKD_FIELD("expect.shot_noise_r2", "minimum R^2 of the shot-noise fit", c.expect.shot_noise_r2));
  r.push_back(CVQKD_FIELD("expect.shot_noise_min_points", "minimum LO powers", c.expect.shot_noise_min_points));
  r.push_back(CVQKD_FIELD("expect.pol_band", "corrected mean photons within this fraction of nominal", c.expect.pol_band));
  r.push_back(CVQKD_FIELD("expect.pol_fade", "uncorrected final-hour fade beyond this fraction", c.expect.pol_fade));
  return r;
}

#undef CVQKD_FIELD

const std::vector<Field>& registry() {
  static const std::vector<Field> r = build_registry();
  return r;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : registry()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Loopback10p4km: return "loopback_10p4km";
    case Scenario::P2p5p2km: return "p2p_5p2km";
    case Scenario::DistanceSweep: return "distance_sweep";
    case Scenario::Pol24h: return "pol_24h";
    case Scenario::ShotNoiseSweep: return "shot_noise_sweep";
    case Scenario::Table1: return "table1";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (const Scenario s : kScenarios) {
    if (name == to_string(s)) return s;
  }
  std::string msg = "unknown scenario '" + std::string(name) + "'; expected one of:";
  for (const Scenario s : kScenarios) msg += std::string(" ") + to_string(s);
  throw ConfigError(msg);
}

std::span<const Scenario> all_scenarios() { return kScenarios; }

void ScenarioConfig::validate() const {
  sim::LinkConfig l = link;
  l.packets = packets;
  try {
    l.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid link: ") + e.what());
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(!va_grid.empty(), "alice.va_grid must not be empty");
  require(std::all_of(va_grid.begin(), va_grid.end(), [](double v) { return v > 0.0; }),
          "alice.va_grid entries must be positive");
  require(timing.periods > 0, "timing.periods must be positive");
  require(timing.lock_fraction > 0.0 && timing.lock_fraction < 1.0, "timing.lock_fraction must lie in (0, 1)");
  require(pol.duration_s > 0.0 && pol.interval_s > 0.0, "pol durations must be positive");
  require(pol.window_frames > 0, "pol.window_frames must be positive");
  require(shot_noise.lo_powers.size() >= 3, "shot_noise.lo_powers needs at least three entries");
  require(std::all_of(shot_noise.lo_powers.begin(), shot_noise.lo_powers.end(), [](double v) { return v > 0.0; }),
          "shot_noise.lo_powers entries must be positive");
  require(shot_noise.frames >= rx::kMinCalibrationFrames, "shot_noise.frames is below the calibration minimum");
  require(!security.distances_km.empty(), "security.distances_km must not be empty");
  require(security.va_min > 0.0 && security.va_max >= security.va_min && security.va_step > 0.0,
          "invalid security V_A grid");
  require(security.symbol_rate > 0.0, "security.symbol_rate must be positive");
  require(security.constant_va > 0.0, "security.constant_va must be positive");
  if (scenario == Scenario::Table1) {
    require(security.hours.size() == security.distances_km.size(),
            "security.hours must have one entry per distance");
    require(expect.table1_kbps.size() == security.distances_km.size(),
            "expect.table1_kbps must have one entry per distance");
  }
}

ScenarioConfig defaults_for(Scenario s) {
  ScenarioConfig c;
  c.scenario = s;
  c.output_dir = std::string("out/") + to_string(s);
  // Loop-back: 10.4 km of fiber plus connectors, 8 dB in total.
  c.link.channel.distance_km = 10.4;
  c.link.channel.fixed_loss_db = 5.92;
  c.link.channel.phase_variance = 0.034;
  if (s == Scenario::P2p5p2km) {
    c.link.channel.distance_km = 5.2;
    c.link.channel.fixed_loss_db = 2.16;
    c.link.channel.phase_variance = 0.030;
  }
  if (s == Scenario::DistanceSweep) {
    c.security.distances_km.clear();
    for (int d = 0; d <= 60; d += 2) c.security.distances_km.push_back(d);
    c.security.finite_n = 1000000000;
  }
  return c;
}

void apply_text(ScenarioConfig& cfg, std::string_view text, std::string_view source) {
  std::vector<std::string> problems;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back(where + "malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(where + "expected key = value");
      continue;
    }
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "scenario") {
      if (value != to_string(cfg.scenario)) {
        problems.push_back(where + "scenario '" + std::string(value) + "' does not match '" + to_string(cfg.scenario) + "'");
      }
      continue;
    }
    const Field* f = find_field(key);
    if (!f) {
      problems.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    try {
      f->set(cfg, value);
    } catch (const ConfigError& e) {
      problems.push_back(where + key + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = std::to_string(problems.size()) + " configuration error(s):";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

void apply_file(ScenarioConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_text(cfg, ss.str(), path);
}

std::string canonical_text(const ScenarioConfig& cfg) {
  std::string out = std::string("scenario = ") + to_string(cfg.scenario) + "\n";
  for (const auto& f : registry()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  c.seed = 0;
  c.output_dir.clear();
  return fnv1a64(canonical_text(c));
}

std::string hash_hex(std::uint64_t h) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kDigits[h & 0xF];
  return out;
}

std::uint64_t resolve_seed(std::uint64_t config_seed, const char* env_value, std::optional<std::uint64_t> cli_seed) {
  if (cli_seed) return *cli_seed;
  if (env_value && *env_value) {
    try {
      return parse_number<std::uint64_t>(env_value);
    } catch (const ConfigError&) {
      throw ConfigError(std::string("CVQKD_LAB_SEED is not an unsigned integer: '") + env_value + "'");
    }
  }
  return config_seed;
}

void write_reference_page(std::ostream& out) {
  const ScenarioConfig base = defaults_for(Scenario::Loopback10p4km);
  out << "# cvqkd-lab configuration reference\n\n"
      << "Files hold `key = value` lines. `[section]` prefixes the keys below it, `#` starts a comment. "
      << "Unknown keys are rejected. Lists are comma separated.\n\n"
      << "| key | type | default | meaning |\n|---|---|---|---|\n";
  for (const auto& f : registry()) {
    out << "| `" << f.key << "` | " << f.type << " | `" << f.get(base) << "` | " << f.help << " |\n";
  }
  out << "\n## Scenario presets\n\nDefaults above are the `loopback_10p4km` preset. Other scenarios change:\n\n";
  const std::string base_text = [&] {
    ScenarioConfig c = base;
    c.output_dir.clear();
    return canonical_text(c);
  }();
  for (const Scenario s : kScenarios) {
    if (s == Scenario::Loopback10p4km) continue;
    ScenarioConfig c = defaults_for(s);
    c.scenario = base.scenario;
    c.output_dir.clear();
    std::istringstream a(base_text), b(canonical_text(c));
    std::string la, lb;
    out << "- `" << to_string(s) << "`:";
    bool any = false;
    while (std::getline(a, la) && std::getline(b, lb)) {
      if (la != lb) {
        out << (any ? ", " : " ") << '`' << lb << '`';
        any = true;
      }
    }
    out << (any ? "" : " nothing") << "\n";
  }
  out << "\nThe output directory defaults to `out/<scenario>`. Seed precedence: config `seed` < "
      << "`CVQKD_LAB_SEED` < `--seed`.\n";
}

}  // namespace cvqkd::config
