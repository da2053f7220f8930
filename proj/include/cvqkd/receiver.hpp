#pragma once

// Bob's pulsed heterodyne front-end: LO and clone-LO schedule, shot and
// electrical noise, detector bias offsets, clone-bin bias subtraction and
// the real-time shot-noise calibration.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/core.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd::rx {

struct LoSchedule {
  double period_ns = 1000.0;
  std::array<double, kBinsPerPeriod> bin_offsets_ns{0.0, 100.0, 500.0, 600.0};
  double lo_power = 8.0;          ///< uW
  double lo_power_nominal = 8.0;  ///< power at which counts_per_snu is specified
  int slew_limit_ns = 1;

  double offset(TimeBin b) const { return bin_offsets_ns[static_cast<int>(b)]; }
  void validate() const;
};

/// Detector bias alpha(t), beta(t) in ADC counts. Offsets scale with LO power;
/// the ramp and wander terms model slow drift.
struct BiasModel {
  double alpha0 = 7.0;
  double beta0 = -3.0;
  double alpha_rate = 0.0;  ///< counts / s
  double beta_rate = 0.0;   ///< counts / s
  double wander_amplitude = 0.0;  ///< counts
  double wander_period_s = 60.0;
  double lo_power_nominal = 8.0;

  double alpha(double t, double lo_power) const;
  double beta(double t, double lo_power) const;
};

struct ReceiverParams {
  DetectorConstants detector;
  LoSchedule lo;
  BiasModel bias;
  double counts_per_snu = 64.0;
  bool noise_enabled = true;
  /// Optional additive ADC noise, counts rms.
  double adc_noise_counts = 0.0;
  /// When true the nominal shot-noise level is trusted instead of measured
  /// (models an input optical switch; also used by noise-free runs).
  bool trusted_calibration = false;

  /// Shot-noise variance per quadrature in counts at the given LO power.
  double nominal_shot_variance(double lo_power) const;
  /// Electrical variance per quadrature in counts.
  double nominal_elec_variance() const;
  void validate() const;
};

/// Field arriving in one bin, already projected onto the matching LO
/// polarization.
struct BinInput {
  tx::Field field{0.0, 0.0};
  double residual_photons = 0.0;
};

/// Selects the LO polarization for a bin: signal-type bins beat against the
/// H LO, reference-type bins against the V LO.
BinInput project_onto_lo(const tx::PolarizedField& light, TimeBin bin);

/// One heterodyne measurement:
///   x = c g (sqrt(eta/2) X_in + n_shot) + c sqrt(nu_e) n_elec + alpha(t)
/// with g = sqrt(lo_power / lo_power_nominal), c = counts_per_snu.
QuadSample measure_bin(const BinInput& incoming, double lo_power, const ReceiverParams& params, double t,
                       rng::NoiseSource& noise);

struct PulseFrame {
  std::uint64_t index = 0;
  double time_s = 0.0;
  std::array<std::optional<QuadSample>, kBinsPerPeriod> bins{};
  /// Set by bias_correct: signal/reference bins hold clone differences with
  /// doubled noise, usable only for triggering and control.
  bool control_path_only = false;
  /// Control-path Z of the reference pulse sampled 1 ns early, on time and
  /// 1 ns late, when the front-end provides sub-bin samples.
  std::optional<std::array<double, 3>> reference_probe_z;

  const std::optional<QuadSample>& operator[](TimeBin b) const { return bins[static_cast<int>(b)]; }
  std::optional<QuadSample>& operator[](TimeBin b) { return bins[static_cast<int>(b)]; }
};

/// X(t) = X_meas(t) - X_meas(t - 500 ns) for the signal and reference bins.
/// Throws FramingError if any of the four bins is missing.
PulseFrame bias_correct(const PulseFrame& frame);

/// Measures all four bins of a period. Light must already have passed the
/// channel and Bob's polarization controller.
PulseFrame measure_frame(const std::array<tx::PolarizedField, kBinsPerPeriod>& light, std::uint64_t index,
                         double time_s, const ReceiverParams& params, rng::NoiseSource& noise);

/// Per-quadrature shot and electrical variances (counts^2) at one LO power.
struct ShotNoiseCalibration {
  double shot_variance = 0.0;
  double elec_variance = 0.0;
  std::size_t frames = 0;

  /// Shot contribution to the clone-differenced Z (two quadratures, doubled).
  double z_shot() const { return 4.0 * shot_variance; }
  double z_elec() const { return 4.0 * elec_variance; }
  /// Electrical noise in SNU.
  double nu_e() const;
};

inline constexpr std::size_t kMinCalibrationFrames = 1000;

/// Shot noise from the clone-signal bins of lit frames (no light from Alice)
/// minus the electrical noise from dark frames (LO off). Both need at least
/// kMinCalibrationFrames frames; otherwise CalibrationError. A negative
/// difference (LO off) is reported as zero shot noise.
ShotNoiseCalibration shot_noise_calibration(std::span<const PulseFrame> lit_frames,
                                            std::span<const PulseFrame> dark_frames);

/// Sample variance per quadrature (x and p pooled) of one bin over frames.
double bin_variance(std::span<const PulseFrame> frames, TimeBin bin);

/// Mean (x, p) of one bin over frames.
QuadSample bin_mean(std::span<const PulseFrame> frames, TimeBin bin);

/// Key-path bias removal: subtracts the per-packet mean of the matching
/// clone bin from every raw parent-bin value, so the noise is not doubled.
std::vector<QuadSample> key_path_correct(std::span<const PulseFrame> frames, TimeBin parent);

/// CSV: frame_index,bin,x_adc,p_adc,corrected_x,corrected_p,z
void write_frames_csv(std::ostream& out, std::span<const PulseFrame> raw_frames);

}  // namespace cvqkd::rx
