#include "cvqkd/core.hpp"

#include <cmath>

#include "cvqkd/error.hpp"

namespace cvqkd {

bool QuadSample::finite() const { return std::isfinite(x) && std::isfinite(p); }

void DetectorConstants::validate() const {
  if (!(eta_det > 0.0 && eta_det <= 1.0)) throw DomainError("eta_det must lie in (0, 1]");
  if (!(t_bob > 0.0 && t_bob <= 1.0)) throw DomainError("t_bob must lie in (0, 1]");
  if (!(nu_e >= 0.0)) throw DomainError("nu_e must be non-negative");
}

QuadSample to_snu(const QuadSample& sample, double shot_variance, double elec_variance) {
  if (!(shot_variance > 0.0) || !std::isfinite(shot_variance)) {
    throw CalibrationError("shot-noise variance must be strictly positive");
  }
  if (!(elec_variance >= 0.0)) throw CalibrationError("electrical variance must be non-negative");
  const double scale = 1.0 / std::sqrt(shot_variance);
  return {sample.x * scale, sample.p * scale, Units::ShotNoiseUnits};
}

QuadSample from_snu(const QuadSample& sample, double shot_variance) {
  if (!(shot_variance > 0.0) || !std::isfinite(shot_variance)) {
    throw CalibrationError("shot-noise variance must be strictly positive");
  }
  const double scale = std::sqrt(shot_variance);
  return {sample.x * scale, sample.p * scale, Units::AdcCounts};
}

double z_value(const QuadSample& sample) { return sample.x * sample.x + sample.p * sample.p; }

double photon_number(double z_mean, double z_shot, double z_elec, double eta) {
  if (!(z_shot > 0.0)) throw CalibrationError("Z_shot must be strictly positive");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  const double detected = (z_mean - z_shot - z_elec) / z_shot;
  return 2.0 * detected / eta;
}

double photon_number(const ZValue& z, double eta) {
  return photon_number(z.z, z.z_shot, z.z_elec, eta);
}

double wrap_angle(double radians) {
  double r = std::fmod(radians + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  // fmod can land exactly on +pi after the shift for inputs just below -pi.
  if (r >= kPi) r -= kTwoPi;
  return r;
}

}  // namespace cvqkd
