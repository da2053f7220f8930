#include "cvqkd/sim.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "cvqkd/error.hpp"

namespace cvqkd::sim {

void LinkConfig::validate() const {
  tx.validate();
  channel.validate();
  receiver.validate();
  if (!(extinction_db > 0.0)) throw DomainError("extinction ratio must be positive");
  if (!(v_a > 0.0)) throw DomainError("V_A must be positive");
  if (!(digital_sigma > 0.0)) throw DomainError("digital sigma must be positive");
  if (!(delta_threshold > 0.0 && delta_threshold <= 1.0)) throw DomainError("delta threshold must lie in (0, 1]");
  if (id_hamming_tolerance < 0 || id_hamming_tolerance > 31) throw DomainError("ID tolerance must lie in [0, 31]");
  if (packets == 0) throw DomainError("at least one packet is required");
  if (idle_frames < static_cast<std::size_t>(detector.warmup_frames) + 1) {
    throw DomainError("idle frames must cover the detector warm-up");
  }
  if (!receiver.trusted_calibration && dark_frames < rx::kMinCalibrationFrames) {
    throw DomainError("dark calibration needs at least " + std::to_string(rx::kMinCalibrationFrames) + " frames");
  }
}

double LinkConfig::reference_phase_variance() const {
  const double n_bob = tx.reference_photons * channel.transmission();
  const double eta = receiver.detector.efficiency();
  if (!(n_bob > 0.0)) return std::numeric_limits<double>::infinity();
  const double noise = receiver.noise_enabled ? 1.0 + receiver.detector.nu_e : 0.0;
  return noise / (2.0 * eta * n_bob);
}

double LinkConfig::injected_jitter_variance() const {
  if (!phase_variance_is_total) return channel.phase_variance;
  return std::max(0.0, channel.phase_variance - reference_phase_variance());
}

// ---------------------------------------------------------------------- Link

Link::Link(const LinkConfig& config, std::uint64_t noise_seed) : config_(config), noise_(noise_seed) {
  state_.carrier_phase = wrap_angle(noise_.phase());
  state_.delta = wrap_angle(noise_.phase());
  jitter_variance_ = config_.injected_jitter_variance();
}

std::array<tx::PolarizedField, kBinsPerPeriod> Link::propagate(const tx::TxPeriod& period, double jitter) const {
  std::array<tx::PolarizedField, kBinsPerPeriod> light;
  for (int b = 0; b < kBinsPerPeriod; ++b) {
    const auto bin = static_cast<TimeBin>(b);
    light[b] = controller_.apply(channel::transmit(period.bins[b], state_, config_.channel, bin, jitter));
  }
  return light;
}

rx::PulseFrame Link::send_with(const tx::TxPeriod& period, const rx::ReceiverParams& params) {
  const double period_s = params.lo.period_ns * 1e-9;
  state_ = channel::advance(state_, period_s, config_.channel, noise_);
  const double jitter = channel::draw_phase_jitter(jitter_variance_, noise_);
  const auto light = propagate(period, jitter);
  rx::PulseFrame frame = rx::measure_frame(light, frame_index_++, time_s_, params, noise_);
  time_s_ += period_s;
  return frame;
}

rx::PulseFrame Link::send(const tx::TxPeriod& period) { return send_with(period, config_.receiver); }

rx::PulseFrame Link::send_dark(const tx::TxPeriod& period) {
  rx::ReceiverParams dark = config_.receiver;
  dark.lo.lo_power = 0.0;
  return send_with(period, dark);
}

void Link::idle_for(double seconds) {
  state_ = channel::advance(state_, seconds, config_.channel, noise_);
  time_s_ += seconds;
}

void Link::set_actuators(const std::array<double, 4>& voltages, const sync::ActuatorModel& model) {
  controller_ = sync::actuator_unitary(voltages, model);
}

// ------------------------------------------------------------ Bob's framing

namespace {

/// Pooled (x and p) variance of one bin, accumulated frame by frame.
class BinVarianceAccumulator {
 public:
  explicit BinVarianceAccumulator(TimeBin bin) : bin_(bin) {}
  void add(const rx::PulseFrame& f) {
    const auto& q = *f[bin_];
    push(q.x);
    push(q.p);
  }
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }

 private:
  // Welford update; x and p are pooled around a common mean, which is what
  // bin_variance does when both means are zero.
  void push(double v) {
    ++count_;
    const double d = v - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (v - mean_);
  }
  TimeBin bin_;
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

constexpr std::size_t kBlockFrames = tx::kPacketSymbols - 1;

std::vector<QuadSample> to_snu_all(const std::vector<QuadSample>& raw, const BlockCalibration& cal) {
  std::vector<QuadSample> out;
  out.reserve(raw.size());
  for (const auto& q : raw) out.push_back(to_snu(q, cal.shot_variance, cal.elec_variance));
  return out;
}

}  // namespace

std::optional<BobPacket> process_candidate(std::span<const rx::PulseFrame> capture, std::size_t start,
                                           const BobContext& ctx) {
  const LinkConfig& cfg = *ctx.config;
  const std::size_t first = start + 1;
  if (first + kBlockFrames > capture.size()) return std::nullopt;
  const auto block = capture.subspan(first, kBlockFrames);

  BobPacket out;
  out.start_frame = start;
  if (cfg.receiver.trusted_calibration) {
    out.calibration.shot_variance = cfg.receiver.nominal_shot_variance(cfg.receiver.lo.lo_power);
    out.calibration.elec_variance = cfg.receiver.nominal_elec_variance();
  } else {
    out.calibration.elec_variance = ctx.elec_variance;
    out.calibration.shot_variance = rx::bin_variance(block, TimeBin::CloneSignal) - ctx.elec_variance;
    if (!(out.calibration.shot_variance > 0.0)) return std::nullopt;
  }

  const auto signal = to_snu_all(rx::key_path_correct(block, TimeBin::Signal), out.calibration);
  const auto reference = to_snu_all(rx::key_path_correct(block, TimeBin::Reference), out.calibration);
  const auto symbols = recovery::recover_symbols(signal, reference);

  const auto at = [&](std::size_t offset, std::size_t count) {
    return std::span<const recovery::RecoveredSymbol>(symbols).subspan(offset - tx::kHeaderOffset, count);
  };
  out.delta = recovery::determine_delta(at(tx::kHeaderOffset, tx::kPatternSymbols),
                                        at(tx::kFooterOffset, tx::kPatternSymbols), tx::kDefaultPattern,
                                        cfg.delta_threshold);
  if (!out.delta.accepted) return std::nullopt;

  out.decoded_id = recovery::decode_bits(at(tx::kIdOffset, tx::kIdSymbols), out.delta.delta);
  out.payload = recovery::apply_delta(at(tx::kPayloadOffset, tx::kPayloadSymbols), out.delta.delta);
  for (const auto& y : out.payload) out.invalid_symbols += y.valid ? 0 : 1;
  return out;
}

namespace {

struct Capture {
  std::vector<rx::PulseFrame> frames;
  double true_delta = 0.0;
};

Capture capture_packet(Link& link, const tx::Packet& packet) {
  const LinkConfig& cfg = link.config();
  const tx::TxPeriod idle = tx::idle_period(cfg.tx, cfg.extinction_db);
  const auto periods = tx::carve_pulses(packet, cfg.extinction_db);
  Capture cap;
  cap.frames.reserve(cfg.idle_frames + periods.size() + cfg.trailing_frames);
  for (std::size_t i = 0; i < cfg.idle_frames; ++i) cap.frames.push_back(link.send(idle));
  for (std::size_t i = 0; i < periods.size(); ++i) {
    cap.frames.push_back(link.send(periods[i]));
    if (i == 0) cap.true_delta = link.state().delta;
  }
  for (std::size_t i = 0; i < cfg.trailing_frames; ++i) cap.frames.push_back(link.send(idle));
  return cap;
}

double measure_elec_variance(Link& link) {
  const LinkConfig& cfg = link.config();
  if (cfg.receiver.trusted_calibration) return cfg.receiver.nominal_elec_variance();
  const tx::TxPeriod idle = tx::idle_period(cfg.tx, cfg.extinction_db);
  BinVarianceAccumulator acc(TimeBin::CloneSignal);
  for (std::size_t i = 0; i < cfg.dark_frames; ++i) acc.add(link.send_dark(idle));
  return acc.variance();
}

std::vector<rng::GaussianPair> draw_payload(rng::EntropySource& alice, double sigma) {
  std::vector<rng::GaussianPair> payload;
  payload.reserve(tx::kPayloadSymbols);
  for (std::size_t i = 0; i < tx::kPayloadSymbols; ++i) payload.push_back(rng::gaussian_pair(alice, sigma));
  return payload;
}

std::vector<std::size_t> candidate_starts(const Capture& cap, const LinkConfig& cfg, double elec_variance) {
  double shot = 0.0;
  double elec = elec_variance;
  if (cfg.receiver.trusted_calibration) {
    shot = cfg.receiver.nominal_shot_variance(cfg.receiver.lo.lo_power);
  } else {
    shot = rx::bin_variance(cap.frames, TimeBin::CloneSignal) - elec_variance;
  }
  if (!(shot > 0.0)) throw CalibrationError("no shot noise measured in the capture");
  // Offline framing examines every trigger in order, so no hold-off.
  sync::PacketDetectorParams params = cfg.detector;
  params.holdoff_frames = 0;
  return sync::detect_packet_starts(cap.frames, params, 4.0 * shot, 4.0 * elec,
                                    cfg.receiver.detector.efficiency());
}

}  // namespace

LinkRunResult run_link(const LinkConfig& config, std::uint64_t seed, std::size_t keep_sample_frames) {
  config.validate();
  rng::SeededEntropy alice(rng::derive_seed(seed, 1));
  Link link(config, rng::derive_seed(seed, 2));
  const std::uint64_t id_seed = rng::derive_seed(seed, 3);

  LinkRunResult result;
  result.t = config.channel.transmission();
  result.eta = config.receiver.detector.efficiency();
  result.injected_jitter_variance = config.injected_jitter_variance();
  result.elec_variance = measure_elec_variance(link);

  const BobContext ctx{&config, result.elec_variance};
  const auto scale = tx::EncodingScale::for_variance(config.v_a, config.digital_sigma * config.digital_sigma);
  std::vector<estimation::EstimationResult> estimates;
  double nu_sum = 0.0;

  for (std::size_t i = 0; i < config.packets; ++i) {
    const auto digital = draw_payload(alice, config.digital_sigma);
    const std::uint64_t id = rng::derive_seed(id_seed, i);
    const tx::Packet packet = tx::build_packet(digital, id, config.tx, scale);
    Capture cap = capture_packet(link, packet);

    PacketOutcome outcome;
    outcome.id = id;
    outcome.true_delta = cap.true_delta;
    for (const std::size_t start : candidate_starts(cap, config, result.elec_variance)) {
      ++outcome.candidates;
      auto bob = process_candidate(cap.frames, start, ctx);
      const int bit_errors = bob ? std::popcount(bob->decoded_id ^ id) : -1;
      if (!bob || bit_errors > config.id_hamming_tolerance) {
        ++outcome.rejected_candidates;
        continue;
      }
      outcome.accepted = true;
      outcome.id_bit_errors = bit_errors;
      outcome.delta = bob->delta;
      outcome.calibration = bob->calibration;

      std::vector<double> dx, dp, mx, mp;
      for (std::size_t j = 0; j < bob->payload.size(); ++j) {
        if (!bob->payload[j].valid) continue;
        dx.push_back(digital[j].x);
        dp.push_back(digital[j].p);
        mx.push_back(bob->payload[j].x);
        mp.push_back(bob->payload[j].p);
      }
      const double nu_e = bob->calibration.elec_variance / bob->calibration.shot_variance;
      nu_sum += nu_e;
      outcome.estimate = estimation::estimate_block(dx, dp, mx, mp, result.t, result.eta, nu_e);
      estimates.push_back(outcome.estimate);
      break;
    }
    result.false_triggers += outcome.rejected_candidates;
    result.accepted += outcome.accepted ? 1 : 0;
    if (i == 0 && keep_sample_frames > 0) {
      const std::size_t keep = std::min(keep_sample_frames, cap.frames.size());
      result.sample_frames.assign(cap.frames.begin(), cap.frames.begin() + static_cast<std::ptrdiff_t>(keep));
    }
    result.packets.push_back(std::move(outcome));
  }

  if (!estimates.empty()) {
    result.average = estimation::average_results(estimates);
    result.nu_e_calibrated = nu_sum / static_cast<double>(estimates.size());
  }
  return result;
}

ExactnessReport noise_free_exactness(LinkConfig config, std::uint64_t seed) {
  config.receiver.noise_enabled = false;
  config.receiver.trusted_calibration = true;
  config.channel.phase_variance = 0.0;
  config.channel.delta_drift_rate = 0.0;
  config.channel.delta_diffusion = 0.0;
  config.channel.pol_drift_rate = 0.0;
  config.channel.pol_diffusion = 0.0;
  config.extinction_db = std::numeric_limits<double>::infinity();
  config.packets = 1;
  config.validate();

  rng::SeededEntropy alice(rng::derive_seed(seed, 1));
  Link link(config, rng::derive_seed(seed, 2));
  const auto scale = tx::EncodingScale::for_variance(config.v_a, config.digital_sigma * config.digital_sigma);
  const auto digital = draw_payload(alice, config.digital_sigma);
  const std::uint64_t id = rng::derive_seed(seed, 3);
  const tx::Packet packet = tx::build_packet(digital, id, config.tx, scale);
  const Capture cap = capture_packet(link, packet);

  ExactnessReport report;
  const BobContext ctx{&config, config.receiver.nominal_elec_variance()};
  for (const std::size_t start : candidate_starts(cap, config, ctx.elec_variance)) {
    auto bob = process_candidate(cap.frames, start, ctx);
    if (!bob || bob->decoded_id != id) continue;
    report.accepted = true;
    const double gain = std::sqrt(config.receiver.detector.efficiency() * config.channel.transmission() / 2.0);
    double err2 = 0.0, exp2 = 0.0;
    for (std::size_t j = 0; j < digital.size(); ++j) {
      const double ex = gain * scale.k * digital[j].x;
      const double ep = gain * scale.k * digital[j].p;
      const double ax = bob->payload[j].x - ex;
      const double ap = bob->payload[j].p - ep;
      err2 += ax * ax + ap * ap;
      exp2 += ex * ex + ep * ep;
      report.max_abs_error = std::max({report.max_abs_error, std::abs(ax), std::abs(ap)});
    }
    report.rms_expected = std::sqrt(exp2 / (2.0 * static_cast<double>(digital.size())));
    report.relative_error = std::sqrt(err2 / exp2);
    break;
  }
  return report;
}

// -------------------------------------------------------------- timing lock

double pulse_overlap(double tau_ns, double width_ns) {
  if (!(width_ns > 0.0)) throw DomainError("pulse width must be positive");
  return std::max(0.0, 1.0 - std::abs(tau_ns) / width_ns);
}

double wrapped_offset(double arrival_ns, double bin_phase_ns) {
  double d = std::fmod(arrival_ns - bin_phase_ns + 250.0, 500.0);
  if (d < 0.0) d += 500.0;
  return d - 250.0;
}

TimingResult simulate_timing(const TimingConfig& cfg, std::uint64_t seed) {
  cfg.link.validate();
  Link link(cfg.link, rng::derive_seed(seed, 2));
  rng::NoiseSource& noise = link.noise();
  const rx::ReceiverParams& params = cfg.link.receiver;
  const double period_ns = params.lo.period_ns;
  const double n_bob = cfg.link.tx.reference_photons * cfg.link.channel.transmission();
  const double width = cfg.link.tx.pulse_width_ns;

  sync::LockState lock = sync::initial_lock_state(n_bob, params, cfg.lock_fraction);
  double arrival = cfg.initial_offset_ns >= 0.0 ? cfg.initial_offset_ns : noise.uniform() * period_ns;
  const double skew_per_period = cfg.clock_offset_ppm * 1e-6 * period_ns;
  const tx::TxPeriod idle = tx::idle_period(cfg.link.tx, cfg.link.extinction_db);

  TimingResult result;
  for (std::size_t k = 0; k < cfg.periods; ++k) {
    link.idle_for(period_ns * 1e-9);
    const double tau = wrapped_offset(arrival, lock.bin_phase_ns);
    const bool blocked = k >= cfg.block_from && k < cfg.block_to;
    const auto light = link.propagate(idle, 0.0);
    const rx::BinInput ref = rx::project_onto_lo(light[1], TimeBin::Reference);
    const rx::BinInput clone = rx::project_onto_lo(light[3], TimeBin::CloneReference);
    const double t0 = link.time_s();

    const QuadSample clone_q = rx::measure_bin(clone, params.lo.lo_power, params, t0 + 600e-9, noise);
    std::array<QuadSample, 3> probes;
    for (int i = 0; i < 3; ++i) {
      rx::BinInput in = ref;
      in.field *= blocked ? 0.0 : pulse_overlap(tau + 1.0 - i, width);
      probes[i] = rx::measure_bin(in, params.lo.lo_power, params, t0 + 100e-9, noise);
      probes[i].x -= clone_q.x;
      probes[i].p -= clone_q.p;
    }

    rx::PulseFrame frame;
    frame.index = k;
    frame.time_s = t0;
    frame.control_path_only = true;
    frame[TimeBin::Reference] = probes[1];
    frame.reference_probe_z = std::array<double, 3>{z_value(probes[0]), z_value(probes[1]), z_value(probes[2])};

    const int previous_phase = lock.bin_phase_ns;
    lock = sync::lock_step(lock, frame, &result.log);
    int slew = std::abs(lock.bin_phase_ns - previous_phase);
    slew = std::min(slew, lock.period_ns - slew);
    result.max_slew_ns = std::max(result.max_slew_ns, slew);

    const bool locked = lock.status == sync::LockStatus::Locked;
    if (locked && !result.lock_period) result.lock_period = k;
    if (result.lock_period) {
      ++result.periods_after_lock;
      result.locked_periods += locked ? 1 : 0;
    }
    if (cfg.trace_every > 0 && k % cfg.trace_every == 0) {
      result.trace.push_back({k, tau, lock.bin_phase_ns, locked, z_value(probes[1])});
    }
    arrival = std::fmod(arrival + skew_per_period, period_ns);
    if (arrival < 0.0) arrival += period_ns;
  }
  result.final_tau_ns = wrapped_offset(arrival, lock.bin_phase_ns);
  return result;
}

// ------------------------------------------------------- polarization drift

PolDriftResult simulate_pol_drift(const PolDriftConfig& cfg, std::uint64_t seed) {
  cfg.link.validate();
  if (!(cfg.interval_s > 0.0) || !(cfg.duration_s > 0.0)) throw DomainError("durations must be positive");
  if (cfg.window_frames < 1) throw DomainError("window must hold at least one frame");
  Link link(cfg.link, rng::derive_seed(seed, 2));
  const rx::ReceiverParams& params = cfg.link.receiver;
  const double eta = params.detector.efficiency();
  const double z_shot = 4.0 * params.nominal_shot_variance(params.lo.lo_power);
  const double z_elec = 4.0 * params.nominal_elec_variance();
  const double n_bob = cfg.link.tx.reference_photons * cfg.link.channel.transmission();
  const double z_threshold = sync::initial_lock_state(n_bob, params).z_threshold;
  const tx::TxPeriod idle = tx::idle_period(cfg.link.tx, cfg.link.extinction_db);

  PolDriftResult result;
  result.nominal_photons = n_bob;

  std::optional<sync::PolMeasurement> baseline;
  const sync::PolProbe probe = [&](const std::array<double, 4>& voltages) {
    link.set_actuators(voltages, cfg.actuators);
    sync::PolMeasurement m;
    for (int i = 0; i < cfg.window_frames; ++i) {
      const rx::PulseFrame corrected = rx::bias_correct(link.send(idle));
      const double z = z_value(*corrected[TimeBin::Reference]);
      m.mean_z += photon_number(z, z_shot, z_elec, eta);
      m.cycle_count += z >= z_threshold ? 1 : 0;
    }
    m.mean_z /= cfg.window_frames;
    if (!baseline) baseline = m;
    return m;
  };

  sync::PolController ctrl;
  ctrl.step = cfg.step_volts;
  ctrl.window_frames = cfg.window_frames;
  ctrl.cycle_count_target = cfg.window_frames;

  const auto steps = static_cast<std::size_t>(std::floor(cfg.duration_s / cfg.interval_s));
  for (std::size_t s = 0; s < steps; ++s) {
    link.idle_for(cfg.interval_s);
    baseline.reset();
    if (cfg.correction) {
      ctrl = sync::pol_step(ctrl, probe, &result.log, link.time_s() * 1e9);
    } else {
      probe(ctrl.actuators);
    }
    result.trace.push_back({link.time_s(), baseline->mean_z, baseline->cycle_count});
  }
  link.set_actuators(ctrl.actuators, cfg.actuators);
  result.accepted_steps = ctrl.accepted;
  result.rejected_steps = ctrl.rejected;

  if (!result.trace.empty()) {
    double sum = 0.0, sum_sq = 0.0, diff_sq = 0.0, last_hour = 0.0;
    std::size_t last_hour_count = 0;
    const double end = result.trace.back().time_s;
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
      const double v = result.trace[i].photons;
      sum += v;
      sum_sq += v * v;
      if (i > 0) diff_sq += (v - result.trace[i - 1].photons) * (v - result.trace[i - 1].photons);
      if (result.trace[i].time_s > end - 3600.0) {
        last_hour += v;
        ++last_hour_count;
      }
    }
    const auto n = static_cast<double>(result.trace.size());
    result.mean_photons = sum / n;
    result.variance = n > 1 ? (sum_sq - sum * sum / n) / (n - 1.0) : 0.0;
    result.short_term_variance = n > 1 ? diff_sq / (2.0 * (n - 1.0)) : 0.0;
    result.final_hour_photons = last_hour / static_cast<double>(last_hour_count);
  }
  return result;
}

// -------------------------------------------------- shot-noise calibration

ShotNoiseSweep shot_noise_sweep(const LinkConfig& config, std::span<const double> lo_powers, std::size_t frames,
                                std::uint64_t seed) {
  if (lo_powers.size() < 3) throw FitError("shot-noise sweep needs at least three LO powers");
  ShotNoiseSweep sweep;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < lo_powers.size(); ++i) {
    LinkConfig cfg = config;
    cfg.receiver.lo.lo_power = lo_powers[i];
    Link link(cfg, rng::derive_seed(seed, 100 + i));
    // Alice idles but her signal pulses are dark, so the clone-signal bin sees vacuum.
    const tx::TxPeriod idle = tx::idle_period(cfg.tx, cfg.extinction_db);
    std::vector<rx::PulseFrame> lit, dark;
    lit.reserve(frames);
    dark.reserve(frames);
    for (std::size_t k = 0; k < frames; ++k) lit.push_back(link.send(idle));
    for (std::size_t k = 0; k < frames; ++k) dark.push_back(link.send_dark(idle));
    ShotNoisePoint pt{lo_powers[i], rx::shot_noise_calibration(lit, dark)};
    xs.push_back(pt.lo_power);
    ys.push_back(pt.calibration.shot_variance);
    sweep.points.push_back(pt);
  }
  const estimation::LineFit fit = estimation::fit_line(xs, ys, 3);
  sweep.slope = fit.slope;
  sweep.intercept = fit.intercept;
  sweep.r_squared = fit.y_variance > 0.0 ? 1.0 - fit.residual_variance / fit.y_variance : 1.0;
  return sweep;
}

double reference_phase_error_variance(LinkConfig config, double reference_photons, std::size_t periods,
                                      std::uint64_t seed) {
  config.tx.reference_photons = reference_photons;
  config.channel.phase_variance = 0.0;
  config.channel.pol_drift_rate = 0.0;
  config.channel.pol_diffusion = 0.0;
  config.validate();
  if (periods < rx::kMinCalibrationFrames) throw DomainError("too few periods for a variance estimate");

  Link link(config, rng::derive_seed(seed, 2));
  const tx::TxPeriod idle = tx::idle_period(config.tx, config.extinction_db);
  std::vector<rx::PulseFrame> frames;
  std::vector<double> truth;
  frames.reserve(periods);
  truth.reserve(periods);
  for (std::size_t k = 0; k < periods; ++k) {
    frames.push_back(link.send(idle));
    truth.push_back(link.state().carrier_phase);
  }
  const auto reference = rx::key_path_correct(frames, TimeBin::Reference);
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < periods; ++k) {
    const double err = wrap_angle(recovery::extract_phi(reference[k]) - truth[k]);
    sum_sq += err * err;
  }
  return sum_sq / static_cast<double>(periods);
}

}  // namespace cvqkd::sim
