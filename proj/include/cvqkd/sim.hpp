#pragma once

// End-to-end link simulation: Alice's packets through the fiber into Bob's
// receiver, Bob's packet framing, carrier recovery and per-packet
// estimation, plus the timing-lock, polarization-drift and shot-noise
// calibration experiments.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/receiver.hpp"
#include "cvqkd/recovery.hpp"
#include "cvqkd/rng.hpp"
#include "cvqkd/sync.hpp"
#include "cvqkd/transmitter.hpp"

namespace cvqkd::sim {

struct LinkConfig {
  tx::TxPulseSpec tx;
  double extinction_db = 30.0;
  double v_a = 25.0;
  double digital_sigma = 100.0;
  channel::ChannelParams channel;
  rx::ReceiverParams receiver;
  sync::PacketDetectorParams detector;
  double delta_threshold = 0.5;
  /// Bits of the 64-bit packet ID that may differ when Bob's decoded ID is
  /// matched against the IDs Alice sent.
  int id_hamming_tolerance = 8;
  std::size_t packets = 100;
  std::size_t idle_frames = 256;  ///< idle periods ahead of each packet
  std::size_t trailing_frames = 16;
  std::size_t dark_frames = 100000;
  /// Treat channel.phase_variance as the total residual after recovery and
  /// inject only what the reference measurement noise does not already add.
  bool phase_variance_is_total = true;

  void validate() const;
  /// Residual phase variance caused by shot and electrical noise on the
  /// reference pulse: (1 + nu_e) / (2 eta T n_ref).
  double reference_phase_variance() const;
  /// Variance of the Gaussian jitter actually applied to each signal pulse.
  double injected_jitter_variance() const;
};

/// Physical link with its own clock, channel state and noise stream. Bob's
/// polarization controller sits between the fiber and his receiver.
class Link {
 public:
  Link(const LinkConfig& config, std::uint64_t noise_seed);

  /// Advances one LO period, sends the period's light and measures it.
  rx::PulseFrame send(const tx::TxPeriod& period);
  /// Same with the LO switched off (electrical-noise calibration).
  rx::PulseFrame send_dark(const tx::TxPeriod& period);
  /// Advances the channel without measuring.
  void idle_for(double seconds);

  void set_actuators(const std::array<double, 4>& voltages, const sync::ActuatorModel& model);
  const channel::ChannelState& state() const { return state_; }
  double time_s() const { return time_s_; }
  rng::NoiseSource& noise() { return noise_; }
  const LinkConfig& config() const { return config_; }
  /// Light at Bob's receiver for the current channel state (no time step).
  std::array<tx::PolarizedField, kBinsPerPeriod> propagate(const tx::TxPeriod& period, double jitter) const;

 private:
  rx::PulseFrame send_with(const tx::TxPeriod& period, const rx::ReceiverParams& params);

  LinkConfig config_;
  rng::NoiseSource noise_;
  channel::ChannelState state_;
  channel::Jones controller_ = channel::Jones::identity();
  double jitter_variance_ = 0.0;
  double time_s_ = 0.0;
  std::uint64_t frame_index_ = 0;
};

/// Calibration Bob applies to one packet block.
struct BlockCalibration {
  double shot_variance = 0.0;
  double elec_variance = 0.0;
};

struct BobPacket {
  std::size_t start_frame = 0;  ///< index of the marker frame in the capture
  std::uint64_t decoded_id = 0;
  recovery::DeltaEstimate delta;
  BlockCalibration calibration;
  std::vector<recovery::RecoveredSymbol> payload;  ///< delta corrected, SNU
  std::size_t invalid_symbols = 0;
};

/// Everything Bob needs besides the frames.
struct BobContext {
  const LinkConfig* config = nullptr;
  double elec_variance = 0.0;  ///< from dark frames
};

/// Frames [start + 1, start + kPacketSymbols) as one packet: key-path bias
/// removal, per-packet shot-noise calibration, phi and delta recovery.
/// Returns std::nullopt when the block runs past the capture or delta
/// estimation rejects it.
std::optional<BobPacket> process_candidate(std::span<const rx::PulseFrame> capture, std::size_t start,
                                           const BobContext& ctx);

struct PacketOutcome {
  std::uint64_t id = 0;
  std::size_t candidates = 0;  ///< trigger events examined
  std::size_t rejected_candidates = 0;
  bool accepted = false;
  int id_bit_errors = -1;
  recovery::DeltaEstimate delta;
  double true_delta = 0.0;
  BlockCalibration calibration;
  estimation::EstimationResult estimate;
};

struct LinkRunResult {
  double t = 0.0;
  double eta = 0.0;
  double nu_e_calibrated = 0.0;
  double elec_variance = 0.0;
  double injected_jitter_variance = 0.0;
  std::vector<PacketOutcome> packets;
  estimation::AveragedEstimate average;
  std::size_t accepted = 0;
  std::size_t false_triggers = 0;
  /// First capture's raw frames, kept for CSV export when requested.
  std::vector<rx::PulseFrame> sample_frames;
};

/// Runs config.packets packets. Alice's digital values come from a
/// SeededEntropy stream and all physical noise from a NoiseSource, both
/// derived from seed.
LinkRunResult run_link(const LinkConfig& config, std::uint64_t seed, std::size_t keep_sample_frames = 0);

/// Noise-free exactness check: the accepted payload of one packet next to
/// Alice's scaled quadratures sqrt(eta T / 2) (x_a, p_a). Measurement noise,
/// phase jitter, leakage and the delta and polarization dynamics are switched
/// off; the carrier phase keeps its random walk.
struct ExactnessReport {
  double max_abs_error = 0.0;
  double rms_expected = 0.0;
  double relative_error = 0.0;  ///< norm of the error over norm of expected
  bool accepted = false;
};
ExactnessReport noise_free_exactness(LinkConfig config, std::uint64_t seed);

// ------------------------------------------------------------- timing lock

struct TimingConfig {
  LinkConfig link;
  double clock_offset_ppm = 20.0;
  std::size_t periods = 200000;
  /// Alice's pulse arrival relative to Bob's period start at t = 0; a
  /// negative value draws it uniformly from [0, period).
  double initial_offset_ns = -1.0;
  double lock_fraction = 0.25;
  /// Periods in [block_from, block_to) carry no reference light.
  std::size_t block_from = 0;
  std::size_t block_to = 0;
  std::size_t trace_every = 1000;
};

struct TimingTracePoint {
  std::size_t period = 0;
  double tau_ns = 0.0;
  int bin_phase_ns = 0;
  bool locked = false;
  double reference_z = 0.0;
};

struct TimingResult {
  std::optional<std::size_t> lock_period;
  int max_slew_ns = 0;
  std::size_t locked_periods = 0;
  std::size_t periods_after_lock = 0;
  double final_tau_ns = 0.0;
  std::vector<TimingTracePoint> trace;
  sync::EventLog log;
};

/// Triangular pulse overlap 1 - |tau| / width (zero beyond the width).
double pulse_overlap(double tau_ns, double width_ns);

/// Offset of Alice's pulse from Bob's LO, wrapped into [-250, 250) ns: the
/// LO and clone LO run at 2 MHz, so the schedule repeats every 500 ns.
double wrapped_offset(double arrival_ns, double bin_phase_ns);

TimingResult simulate_timing(const TimingConfig& config, std::uint64_t seed);

// ------------------------------------------------------ polarization drift

struct PolDriftConfig {
  LinkConfig link;
  double duration_s = 86400.0;
  double interval_s = 10.0;
  bool correction = true;
  sync::ActuatorModel actuators;
  double step_volts = 0.2;
  int window_frames = 64;
};

struct PolDriftSample {
  double time_s = 0.0;
  double photons = 0.0;
  int cycle_count = 0;
};

struct PolDriftResult {
  double nominal_photons = 0.0;  ///< reference photons at Bob with perfect alignment
  std::vector<PolDriftSample> trace;
  double mean_photons = 0.0;
  double final_hour_photons = 0.0;
  /// Half the mean squared difference of consecutive samples.
  double short_term_variance = 0.0;
  double variance = 0.0;
  std::uint64_t accepted_steps = 0;
  std::uint64_t rejected_steps = 0;
  sync::EventLog log;
};

PolDriftResult simulate_pol_drift(const PolDriftConfig& config, std::uint64_t seed);

// ------------------------------------------------- shot-noise calibration

struct ShotNoisePoint {
  double lo_power = 0.0;
  rx::ShotNoiseCalibration calibration;
};

struct ShotNoiseSweep {
  std::vector<ShotNoisePoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Calibrates at every LO power from lit frames (no light from Alice in the
/// clone-signal bin) and LO-off dark frames.
ShotNoiseSweep shot_noise_sweep(const LinkConfig& config, std::span<const double> lo_powers, std::size_t frames,
                                std::uint64_t seed);

/// Reference-only phase recovery: per-period phase error variance of
/// extract_phi for the given reference photon number at Alice.
double reference_phase_error_variance(LinkConfig config, double reference_photons, std::size_t periods,
                                      std::uint64_t seed);

}  // namespace cvqkd::sim
