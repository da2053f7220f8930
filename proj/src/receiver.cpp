#include "cvqkd/receiver.hpp"

#include <cmath>
#include <ostream>

#include "cvqkd/error.hpp"

namespace cvqkd::rx {

void LoSchedule::validate() const {
  if (lo_power < 0.0 || !(lo_power_nominal > 0.0)) throw DomainError("LO power must be >= 0, nominal > 0");
  const double clone_gap = bin_offsets_ns[2] - bin_offsets_ns[0];
  if (std::abs(clone_gap - 500.0) > 1e-9 || std::abs(bin_offsets_ns[3] - bin_offsets_ns[1] - 500.0) > 1e-9) {
    throw DomainError("clone bins must trail their parents by 500 ns");
  }
}

namespace {
double bias_value(double offset, double rate, const BiasModel& m, double t, double lo_power, double phase) {
  double value = offset + rate * t;
  if (m.wander_amplitude != 0.0) {
    value += m.wander_amplitude * std::sin(kTwoPi * t / m.wander_period_s + phase);
  }
  return value * lo_power / m.lo_power_nominal;
}
}  // namespace

double BiasModel::alpha(double t, double lo_power) const {
  return bias_value(alpha0, alpha_rate, *this, t, lo_power, 0.0);
}

double BiasModel::beta(double t, double lo_power) const {
  return bias_value(beta0, beta_rate, *this, t, lo_power, 1.0);
}

double ReceiverParams::nominal_shot_variance(double lo_power) const {
  return counts_per_snu * counts_per_snu * lo_power / lo.lo_power_nominal;
}

double ReceiverParams::nominal_elec_variance() const {
  return counts_per_snu * counts_per_snu * detector.nu_e;
}

void ReceiverParams::validate() const {
  detector.validate();
  lo.validate();
  if (!(counts_per_snu > 0.0)) throw DomainError("counts_per_snu must be positive");
  if (adc_noise_counts < 0.0) throw DomainError("ADC noise must be non-negative");
}

BinInput project_onto_lo(const tx::PolarizedField& light, TimeBin bin) {
  const bool signal_lo = bin == TimeBin::Signal || bin == TimeBin::CloneSignal;
  if (signal_lo) return {light.h, light.residual_h};
  return {light.v, light.residual_v};
}

QuadSample measure_bin(const BinInput& incoming, double lo_power, const ReceiverParams& params, double t,
                       rng::NoiseSource& noise) {
  const double c = params.counts_per_snu;
  const double gain = c * std::sqrt(lo_power / params.lo.lo_power_nominal);
  const double eta = params.detector.efficiency();

  tx::Field field = incoming.field;
  if (incoming.residual_photons > 0.0) field += std::polar(std::sqrt(incoming.residual_photons), noise.phase());

  const double signal_scale = std::sqrt(eta / 2.0);
  double x = gain * signal_scale * 2.0 * field.real();
  double p = gain * signal_scale * 2.0 * field.imag();
  if (params.noise_enabled) {
    const double elec_sd = c * std::sqrt(params.detector.nu_e);
    x += gain * noise.normal() + noise.normal(elec_sd);
    p += gain * noise.normal() + noise.normal(elec_sd);
    if (params.adc_noise_counts > 0.0) {
      x += noise.normal(params.adc_noise_counts);
      p += noise.normal(params.adc_noise_counts);
    }
  }
  x += params.bias.alpha(t, lo_power);
  p += params.bias.beta(t, lo_power);
  return {x, p, Units::AdcCounts};
}

PulseFrame bias_correct(const PulseFrame& frame) {
  for (const auto& bin : frame.bins) {
    if (!bin) throw FramingError("bias correction needs all four bins of the period");
  }
  PulseFrame out = frame;
  const auto difference = [](const QuadSample& a, const QuadSample& b) {
    return QuadSample{a.x - b.x, a.p - b.p, a.units};
  };
  out[TimeBin::Signal] = difference(*frame[TimeBin::Signal], *frame[TimeBin::CloneSignal]);
  out[TimeBin::Reference] = difference(*frame[TimeBin::Reference], *frame[TimeBin::CloneReference]);
  out.control_path_only = true;
  return out;
}

PulseFrame measure_frame(const std::array<tx::PolarizedField, kBinsPerPeriod>& light, std::uint64_t index,
                         double time_s, const ReceiverParams& params, rng::NoiseSource& noise) {
  PulseFrame frame;
  frame.index = index;
  frame.time_s = time_s;
  for (int b = 0; b < kBinsPerPeriod; ++b) {
    const auto bin = static_cast<TimeBin>(b);
    const double t = time_s + params.lo.offset(bin) * 1e-9;
    frame.bins[b] = measure_bin(project_onto_lo(light[b], bin), params.lo.lo_power, params, t, noise);
  }
  return frame;
}

double ShotNoiseCalibration::nu_e() const {
  if (!(shot_variance > 0.0)) throw CalibrationError("no shot noise measured");
  return elec_variance / shot_variance;
}

double bin_variance(std::span<const PulseFrame> frames, TimeBin bin) {
  if (frames.size() < 2) throw CalibrationError("variance needs at least two frames");
  double sx = 0, sp = 0, sxx = 0, spp = 0;
  std::size_t n = 0;
  for (const auto& f : frames) {
    const auto& q = f[bin];
    if (!q) throw FramingError("frame is missing the requested bin");
    sx += q->x;
    sp += q->p;
    ++n;
  }
  const double mx = sx / static_cast<double>(n);
  const double mp = sp / static_cast<double>(n);
  for (const auto& f : frames) {
    const auto& q = *f[bin];
    sxx += (q.x - mx) * (q.x - mx);
    spp += (q.p - mp) * (q.p - mp);
  }
  return (sxx + spp) / (2.0 * static_cast<double>(n - 1));
}

QuadSample bin_mean(std::span<const PulseFrame> frames, TimeBin bin) {
  if (frames.empty()) throw CalibrationError("mean of an empty frame sequence");
  double sx = 0, sp = 0;
  Units units = Units::AdcCounts;
  for (const auto& f : frames) {
    const auto& q = f[bin];
    if (!q) throw FramingError("frame is missing the requested bin");
    sx += q->x;
    sp += q->p;
    units = q->units;
  }
  const auto n = static_cast<double>(frames.size());
  return {sx / n, sp / n, units};
}

ShotNoiseCalibration shot_noise_calibration(std::span<const PulseFrame> lit_frames,
                                            std::span<const PulseFrame> dark_frames) {
  if (lit_frames.size() < kMinCalibrationFrames || dark_frames.size() < kMinCalibrationFrames) {
    throw CalibrationError("shot-noise calibration needs at least " + std::to_string(kMinCalibrationFrames) +
                           " lit and dark frames");
  }
  ShotNoiseCalibration cal;
  cal.elec_variance = bin_variance(dark_frames, TimeBin::CloneSignal);
  const double total = bin_variance(lit_frames, TimeBin::CloneSignal);
  cal.shot_variance = std::max(0.0, total - cal.elec_variance);
  cal.frames = lit_frames.size();
  return cal;
}

std::vector<QuadSample> key_path_correct(std::span<const PulseFrame> frames, TimeBin parent) {
  TimeBin clone;
  if (parent == TimeBin::Signal) {
    clone = TimeBin::CloneSignal;
  } else if (parent == TimeBin::Reference) {
    clone = TimeBin::CloneReference;
  } else {
    throw FramingError("key-path correction applies to signal or reference bins");
  }
  const QuadSample offset = bin_mean(frames, clone);
  std::vector<QuadSample> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    const auto& q = f[parent];
    if (!q) throw FramingError("frame is missing the requested bin");
    out.push_back({q->x - offset.x, q->p - offset.p, q->units});
  }
  return out;
}

void write_frames_csv(std::ostream& out, std::span<const PulseFrame> raw_frames) {
  static constexpr const char* kNames[] = {"signal", "reference", "clone_signal", "clone_reference"};
  out << "frame_index,bin,x_adc,p_adc,corrected_x,corrected_p,z\n";
  out.precision(12);
  for (const auto& frame : raw_frames) {
    std::optional<PulseFrame> corrected;
    bool complete = true;
    for (const auto& b : frame.bins) complete = complete && b.has_value();
    if (complete) corrected = bias_correct(frame);
    for (int b = 0; b < kBinsPerPeriod; ++b) {
      if (!frame.bins[b]) continue;
      out << frame.index << ',' << kNames[b] << ',' << frame.bins[b]->x << ',' << frame.bins[b]->p << ',';
      if (corrected && b < 2) {
        const auto& q = *corrected->bins[b];
        out << q.x << ',' << q.p << ',' << z_value(q) << '\n';
      } else {
        out << ",,\n";
      }
    }
  }
}

}  // namespace cvqkd::rx
