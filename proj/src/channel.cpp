#include "cvqkd/channel.hpp"

#include <cmath>

#include "cvqkd/error.hpp"

namespace cvqkd::channel {

Jones Jones::operator*(const Jones& r) const {
  return {hh * r.hh + hv * r.vh, hh * r.hv + hv * r.vv, vh * r.hh + vv * r.vh, vh * r.hv + vv * r.vv};
}

PolarizedField Jones::apply(const PolarizedField& in) const {
  PolarizedField out;
  out.h = hh * in.h + hv * in.v;
  out.v = vh * in.h + vv * in.v;
  out.residual_h = std::norm(hh) * in.residual_h + std::norm(hv) * in.residual_v;
  out.residual_v = std::norm(vh) * in.residual_h + std::norm(vv) * in.residual_v;
  return out;
}

Jones rotation_x(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  return {{c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0}};
}

Jones rotation_y(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  return {{c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0}};
}

Jones rotation_z(double angle) {
  return {std::polar(1.0, -angle / 2.0), {0.0, 0.0}, {0.0, 0.0}, std::polar(1.0, angle / 2.0)};
}

Jones polarization_unitary(const std::array<double, 3>& angles) {
  return rotation_z(angles[0]) * rotation_y(angles[1]) * rotation_z(angles[2]);
}

double ChannelParams::transmission() const { return std::pow(10.0, -loss_db() / 10.0); }

void ChannelParams::validate() const {
  if (distance_km < 0.0 || atten_db_per_km < 0.0 || fixed_loss_db < 0.0) {
    throw DomainError("distance, attenuation and fixed loss must be non-negative");
  }
  if (phase_variance < 0.0 || carrier_diffusion < 0.0 || delta_diffusion < 0.0 || pol_diffusion < 0.0) {
    throw DomainError("variances and diffusion constants must be non-negative");
  }
}

PolarizedField transmit(const PolarizedField& pulse, const ChannelState& state, const ChannelParams& params,
                        TimeBin bin, double jitter) {
  const bool signal_path = bin == TimeBin::Signal || bin == TimeBin::CloneSignal;
  const double theta = state.carrier_phase + (signal_path ? state.delta + jitter : 0.0);
  const double amplitude = std::sqrt(params.transmission());
  const std::complex<double> factor = std::polar(amplitude, -theta);

  PolarizedField scaled;
  scaled.h = pulse.h * factor;
  scaled.v = pulse.v * factor;
  scaled.residual_h = pulse.residual_h * amplitude * amplitude;
  scaled.residual_v = pulse.residual_v * amplitude * amplitude;
  return polarization_unitary(state.pol_angles).apply(scaled);
}

ChannelState advance(ChannelState state, double dt, const ChannelParams& params, rng::NoiseSource& noise) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (params.carrier_diffusion > 0.0) {
    state.carrier_phase = wrap_angle(state.carrier_phase + noise.normal(std::sqrt(params.carrier_diffusion * dt)));
  }
  double delta_step = params.delta_drift_rate * dt;
  if (params.delta_diffusion > 0.0) delta_step += noise.normal(std::sqrt(params.delta_diffusion * dt));
  state.delta = wrap_angle(state.delta + delta_step);

  static constexpr std::array<double, 3> kDriftSigns{1.0, 1.0, -1.0};
  for (std::size_t i = 0; i < state.pol_angles.size(); ++i) {
    double step = kDriftSigns[i] * params.pol_drift_rate * dt;
    if (params.pol_diffusion > 0.0) step += noise.normal(std::sqrt(params.pol_diffusion * dt));
    state.pol_angles[i] = wrap_angle(state.pol_angles[i] + step);
  }
  state.clock_skew_ns += params.clock_offset_ppm * 1e-6 * dt * 1e9;
  return state;
}

double draw_phase_jitter(double variance, rng::NoiseSource& noise) {
  if (variance <= 0.0) return 0.0;
  return noise.normal(std::sqrt(variance));
}

}  // namespace cvqkd::channel
