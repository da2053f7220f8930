#include "cvqkd/transmitter.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cvqkd/error.hpp"

namespace cvqkd::tx {

Field amplitude_from_quadratures(double x, double p) { return {x / 2.0, p / 2.0}; }

QuadSample quadratures_of(Field alpha) {
  return {2.0 * alpha.real(), 2.0 * alpha.imag(), Units::ShotNoiseUnits};
}

SagnacDrive SagnacDrive::normalized() const { return {wrap_angle(phi_cw), wrap_angle(phi_ccw)}; }

Field sagnac_output(Field alpha_in, const SagnacDrive& drive) {
  const double mean_phase = 0.5 * (drive.phi_cw + drive.phi_ccw);
  const double half_difference = 0.5 * (drive.phi_cw - drive.phi_ccw);
  return std::polar(std::sin(half_difference), mean_phase) * alpha_in;
}

SagnacDrive drive_for_target(double x_a, double p_a, Field alpha_in) {
  const Field target = amplitude_from_quadratures(x_a, p_a);
  const double target_amplitude = std::abs(target);
  if (target_amplitude == 0.0) return {0.0, 0.0};

  const double input_amplitude = std::abs(alpha_in);
  // Relative slack so that a target exactly at full scale stays reachable.
  if (input_amplitude == 0.0 || target_amplitude > input_amplitude * (1.0 + 1e-12)) {
    throw EncodingError("requested amplitude exceeds the modulator input amplitude");
  }
  const double ratio = std::min(1.0, target_amplitude / input_amplitude);
  const double half_difference = std::asin(ratio);
  const double mean_phase = std::arg(target) - std::arg(alpha_in);
  return SagnacDrive{mean_phase + half_difference, mean_phase - half_difference}.normalized();
}

EncodingScale EncodingScale::for_variance(double v_a, double digital_variance) {
  if (!(v_a >= 0.0) || !(digital_variance > 0.0)) {
    throw DomainError("modulation variance must be >= 0 and digital variance > 0");
  }
  return {std::sqrt(v_a / digital_variance)};
}

void TxPulseSpec::validate() const {
  if (reference_photons < 0.0 || header_photons < 0.0 || marker_factor < 0.0) {
    throw DomainError("photon numbers must be non-negative");
  }
  if (!(signal_reference_gap_ns < period_ns)) throw DomainError("signal/reference gap must be below the period");
}

const char* to_string(SymbolRole role) {
  switch (role) {
    case SymbolRole::Marker: return "marker";
    case SymbolRole::Header: return "header";
    case SymbolRole::Id: return "id";
    case SymbolRole::Payload: return "payload";
    case SymbolRole::Footer: return "footer";
    case SymbolRole::Idle: return "idle";
  }
  return "unknown";
}

int pattern_bit(std::uint64_t pattern, std::size_t i) {
  return static_cast<int>((pattern >> (63 - i)) & 1u);
}

double pattern_sign(std::uint64_t pattern, std::size_t i) { return pattern_bit(pattern, i) == 0 ? 1.0 : -1.0; }

Packet build_packet(std::span<const rng::GaussianPair> payload, std::uint64_t id, const TxPulseSpec& spec,
                    EncodingScale scale, std::uint64_t pattern) {
  if (payload.size() != kPayloadSymbols) {
    throw FramingError("packet payload must hold exactly " + std::to_string(kPayloadSymbols) + " symbols, got " +
                       std::to_string(payload.size()));
  }
  spec.validate();

  Packet packet;
  packet.id = id;
  packet.pattern = pattern;
  packet.scale = scale;
  packet.spec = spec;
  packet.digital.assign(payload.begin(), payload.end());
  packet.symbols.reserve(kPacketSymbols);

  const double binary_amplitude = 2.0 * std::sqrt(spec.header_photons);
  const double marker_amplitude = 2.0 * std::sqrt(spec.marker_factor * spec.reference_photons);

  packet.symbols.push_back({SymbolRole::Marker, marker_amplitude, 0.0});
  for (std::size_t i = 0; i < kPatternSymbols; ++i) {
    packet.symbols.push_back({SymbolRole::Header, pattern_sign(pattern, i) * binary_amplitude, 0.0});
  }
  for (std::size_t i = 0; i < kIdSymbols; ++i) {
    packet.symbols.push_back({SymbolRole::Id, pattern_sign(id, i) * binary_amplitude, 0.0});
  }
  for (const auto& pair : payload) {
    packet.symbols.push_back({SymbolRole::Payload, scale.k * pair.x, scale.k * pair.p});
  }
  for (std::size_t i = 0; i < kPatternSymbols; ++i) {
    packet.symbols.push_back({SymbolRole::Footer, pattern_sign(pattern, i) * binary_amplitude, 0.0});
  }
  return packet;
}

namespace {

double leakage(double peak_photons, double extinction_db) {
  if (!(extinction_db > 0.0)) throw DomainError("extinction ratio must be positive");
  return peak_photons * std::pow(10.0, -extinction_db / 10.0);
}

TxPeriod reference_period(double reference_photons, double extinction_db) {
  TxPeriod period;
  const double residual = leakage(reference_photons, extinction_db);
  period[TimeBin::Reference].v = Field{std::sqrt(reference_photons), 0.0};
  period[TimeBin::Signal].residual_v = residual;
  period[TimeBin::CloneSignal].residual_v = residual;
  period[TimeBin::CloneReference].residual_v = residual;
  return period;
}

}  // namespace

TxPeriod idle_period(const TxPulseSpec& spec, double extinction_db) {
  return reference_period(spec.reference_photons, extinction_db);
}

std::vector<TxPeriod> carve_pulses(const Packet& packet, double extinction_db) {
  double full_scale = 0.0;
  for (const auto& s : packet.symbols) {
    if (s.role != SymbolRole::Marker) full_scale = std::max(full_scale, s.photons());
  }
  const Field modulator_input{std::sqrt(full_scale), 0.0};

  std::vector<TxPeriod> periods;
  periods.reserve(packet.symbols.size());
  for (const auto& symbol : packet.symbols) {
    if (symbol.role == SymbolRole::Marker) {
      TxPeriod period = reference_period(symbol.photons(), extinction_db);
      period.role = SymbolRole::Marker;
      periods.push_back(period);
      continue;
    }
    TxPeriod period = reference_period(packet.spec.reference_photons, extinction_db);
    period.role = symbol.role;
    const SagnacDrive drive = drive_for_target(symbol.x_a, symbol.p_a, modulator_input);
    period[TimeBin::Signal].h = sagnac_output(modulator_input, drive);
    periods.push_back(period);
  }
  return periods;
}

void write_packet_csv(std::ostream& out, const Packet& packet) {
  out << "bin_index,role,x_a,p_a,photons\n";
  out.precision(17);
  for (std::size_t i = 0; i < packet.symbols.size(); ++i) {
    const auto& s = packet.symbols[i];
    out << i << ',' << to_string(s.role) << ',' << s.x_a << ',' << s.p_a << ',' << s.photons() << '\n';
  }
}

}  // namespace cvqkd::tx
