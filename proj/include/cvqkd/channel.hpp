#pragma once

// Fiber link: attenuation, fast carrier phase between Alice's pulses and Bob's
// LO, the slowly varying signal/reference offset delta, polarization drift and
// the Alice/Bob clock offset.

#include <array>
#include <complex>

#include "cvqkd/core.hpp"
#include "cvqkd/rng.hpp"
#include "cvqkd/transmitter.hpp"

namespace cvqkd::channel {

using tx::Field;
using tx::PolarizedField;

/// 2x2 Jones matrix acting on (H, V) amplitudes, row-major.
struct Jones {
  std::complex<double> hh{1.0, 0.0};
  std::complex<double> hv{0.0, 0.0};
  std::complex<double> vh{0.0, 0.0};
  std::complex<double> vv{1.0, 0.0};

  static Jones identity() { return {}; }
  Jones operator*(const Jones& rhs) const;
  /// Applies to both coherent components; residual (phase-random) powers are
  /// redistributed with |m_ij|^2.
  PolarizedField apply(const PolarizedField& in) const;
};

Jones rotation_x(double angle);
Jones rotation_y(double angle);
Jones rotation_z(double angle);

/// Rz(a) * Ry(b) * Rz(c). With light launched in V, the power left in V is
/// cos^2(b / 2).
Jones polarization_unitary(const std::array<double, 3>& angles);

struct ChannelParams {
  double distance_km = 10.4;
  double atten_db_per_km = 0.2;
  double fixed_loss_db = 5.92;  ///< 10.4 km loop-back: 8 dB total
  /// Residual per-symbol phase variance after reference-based recovery, rad^2.
  double phase_variance = 0.0;
  /// Diffusion constant of the carrier phase random walk, rad^2 / s.
  double carrier_diffusion = 1.0e4;
  double delta_drift_rate = 0.05;  ///< rad / s
  double delta_diffusion = 1.0e-4;  ///< rad^2 / s
  /// Deterministic drift of the three birefringence angles, rad / s, applied
  /// with signs (+, +, -).
  double pol_drift_rate = 1.5e-5;
  double pol_diffusion = 1.0e-9;  ///< rad^2 / s
  double clock_offset_ppm = 0.0;

  double loss_db() const { return atten_db_per_km * distance_km + fixed_loss_db; }
  /// T = 10^(-loss_db / 10)
  double transmission() const;
  void validate() const;
};

struct ChannelState {
  double carrier_phase = 0.0;  ///< phi
  double delta = 0.0;
  std::array<double, 3> pol_angles{0.0, 0.0, 0.0};
  double clock_skew_ns = 0.0;
};

/// Scales by sqrt(T), applies the polarization unitary and rotates the phase
/// by phi (plus delta and the per-pair jitter for signal-path bins). The
/// rotation multiplies the field by exp(-i theta) so that measured quadratures
/// follow X_B = X_A cos(theta) + P_A sin(theta).
PolarizedField transmit(const PolarizedField& pulse, const ChannelState& state, const ChannelParams& params,
                        TimeBin bin, double jitter = 0.0);

/// Advances the stochastic processes by dt seconds.
ChannelState advance(ChannelState state, double dt, const ChannelParams& params, rng::NoiseSource& noise);

/// Zero-mean Gaussian phase jitter with the given variance.
double draw_phase_jitter(double variance, rng::NoiseSource& noise);

}  // namespace cvqkd::channel
