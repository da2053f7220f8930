#pragma once

// Quadrature samples, shot-noise-unit conversion and the Z / photon-number
// arithmetic shared by triggering, calibration and estimation.
//
// Quadrature convention: X = 2 Re(alpha), P = 2 Im(alpha). A vacuum state has
// unit variance per quadrature in shot-noise units (SNU) and a coherent state
// |alpha> has mean photon number |alpha|^2 = (X^2 + P^2) / 4.

#include <numbers>

namespace cvqkd {

enum class Units { AdcCounts, ShotNoiseUnits };

struct QuadSample {
  double x = 0.0;
  double p = 0.0;
  Units units = Units::ShotNoiseUnits;

  bool finite() const;
};

/// Z of one (bias corrected) measurement together with the shot and
/// electrical contributions it is referenced against.
struct ZValue {
  double z = 0.0;
  double z_shot = 0.0;
  double z_elec = 0.0;
};

struct DetectorConstants {
  double eta_det = 0.5;  ///< photodiode quantum efficiency
  double t_bob = 0.84;   ///< transmission through the receiver optics
  double nu_e = 0.175;   ///< electrical noise per quadrature, SNU

  /// Effective detection efficiency eta = eta_det * t_bob.
  double efficiency() const { return eta_det * t_bob; }
  void validate() const;
};

/// Divides by the shot-noise standard deviation. Throws CalibrationError when
/// shot_variance is not strictly positive or elec_variance is negative.
QuadSample to_snu(const QuadSample& sample, double shot_variance, double elec_variance);

/// Inverse of to_snu for the same shot variance.
QuadSample from_snu(const QuadSample& sample, double shot_variance);

double z_value(const QuadSample& sample);

/// Arriving photon number from a mean Z:
///   n_det = (Z - Z_shot - Z_elec) / Z_shot,  n = 2 n_det / eta.
/// Z_shot and Z_elec are the contributions to the clone-differenced Z used on
/// the control path (see ShotNoiseCalibration::z_shot).
double photon_number(double z_mean, double z_shot, double z_elec, double eta);
double photon_number(const ZValue& z, double eta);

/// Wraps an angle into [-pi, pi).
double wrap_angle(double radians);

/// The four time bins of one 1 us period as seen by the receiver. Alice only
/// emits light in the signal and reference bins; the clone bins trail their
/// parents by 500 ns.
enum class TimeBin : int { Signal = 0, Reference = 1, CloneSignal = 2, CloneReference = 3 };
inline constexpr int kBinsPerPeriod = 4;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace cvqkd
