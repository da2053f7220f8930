#pragma once

// Alice: GMCS symbol encoding through the Sagnac phase-amplitude modulator,
// packet assembly and pulse carving with finite extinction.

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cvqkd/core.hpp"
#include "cvqkd/rng.hpp"

namespace cvqkd::tx {

/// Complex coherent-state amplitude; |alpha|^2 is the mean photon number.
using Field = std::complex<double>;

/// (x + i p) / 2 under the X = 2 Re(alpha) convention.
Field amplitude_from_quadratures(double x, double p);
QuadSample quadratures_of(Field alpha);

struct SagnacDrive {
  double phi_cw = 0.0;
  double phi_ccw = 0.0;

  /// Both phases wrapped into [-pi, pi). The output field is unchanged.
  SagnacDrive normalized() const;
};

/// alpha_out = exp(i (phi_cw + phi_ccw) / 2) * sin((phi_cw - phi_ccw) / 2) * alpha_in
Field sagnac_output(Field alpha_in, const SagnacDrive& drive);

/// Drive phases that make sagnac_output(alpha_in, drive) equal the coherent
/// state with quadratures (x_a, p_a). Throws EncodingError when the requested
/// amplitude exceeds |alpha_in|.
SagnacDrive drive_for_target(double x_a, double p_a, Field alpha_in);

/// Maps Alice's digital encoding values to SNU: X_A = k * digital.
struct EncodingScale {
  double k = 1.0;

  static EncodingScale for_variance(double v_a, double digital_variance);
  double modulation_variance(double digital_variance) const { return k * k * digital_variance; }
};

struct TxPulseSpec {
  double reference_photons = 1000.0;
  double header_photons = 100.0;
  /// Packet-start marker brightness relative to a normal reference pulse.
  double marker_factor = 4.0;
  double pulse_width_ns = 12.0;
  double period_ns = 1000.0;
  double signal_reference_gap_ns = 100.0;

  void validate() const;
};

enum class SymbolRole { Marker, Header, Id, Payload, Footer, Idle };

const char* to_string(SymbolRole role);

struct Symbol {
  SymbolRole role = SymbolRole::Payload;
  double x_a = 0.0;  ///< SNU
  double p_a = 0.0;  ///< SNU

  double photons() const { return (x_a * x_a + p_a * p_a) / 4.0; }
};

inline constexpr std::size_t kPayloadSymbols = 8192;
inline constexpr std::size_t kPatternSymbols = 64;
inline constexpr std::size_t kIdSymbols = 64;
inline constexpr std::size_t kPacketSymbols = 1 + kPatternSymbols + kIdSymbols + kPayloadSymbols + kPatternSymbols;

namespace detail {
// 63-chip maximal-length sequence of x^6 + x^5 + 1 (seed 0b111111), padded
// with one trailing zero to 64 bits. Bit i of the pattern is bit (63 - i).
constexpr std::uint64_t make_default_pattern() {
  unsigned state = 0x3Fu;
  std::uint64_t out = 0;
  for (int i = 0; i < 63; ++i) {
    const unsigned bit = state & 1u;
    out = (out << 1) | bit;
    const unsigned feedback = ((state >> 0) ^ (state >> 1)) & 1u;
    state = (state >> 1) | (feedback << 5);
  }
  return out << 1;
}
}  // namespace detail

inline constexpr std::uint64_t kDefaultPattern = detail::make_default_pattern();

/// Bit i (0-based, transmission order) of a 64-bit pattern.
int pattern_bit(std::uint64_t pattern, std::size_t i);
/// +1 for bit 0 (phase 0), -1 for bit 1 (phase pi).
double pattern_sign(std::uint64_t pattern, std::size_t i);

struct Packet {
  std::uint64_t id = 0;
  std::uint64_t pattern = kDefaultPattern;
  EncodingScale scale;
  TxPulseSpec spec;
  std::vector<Symbol> symbols;             ///< kPacketSymbols, in transmission order
  std::vector<rng::GaussianPair> digital;  ///< payload digital values before scaling

  std::span<const Symbol> header() const { return {symbols.data() + 1, kPatternSymbols}; }
  std::span<const Symbol> id_field() const { return {symbols.data() + 1 + kPatternSymbols, kIdSymbols}; }
  std::span<const Symbol> payload() const {
    return {symbols.data() + 1 + kPatternSymbols + kIdSymbols, kPayloadSymbols};
  }
  std::span<const Symbol> footer() const {
    return {symbols.data() + 1 + kPatternSymbols + kIdSymbols + kPayloadSymbols, kPatternSymbols};
  }
};

inline constexpr std::size_t kHeaderOffset = 1;
inline constexpr std::size_t kIdOffset = kHeaderOffset + kPatternSymbols;
inline constexpr std::size_t kPayloadOffset = kIdOffset + kIdSymbols;
inline constexpr std::size_t kFooterOffset = kPayloadOffset + kPayloadSymbols;

/// Throws FramingError unless payload holds exactly kPayloadSymbols pairs.
Packet build_packet(std::span<const rng::GaussianPair> payload, std::uint64_t id, const TxPulseSpec& spec,
                    EncodingScale scale, std::uint64_t pattern = kDefaultPattern);

/// Light in one time bin: the signal-path (H) and reference-path (V)
/// polarization components, plus phase-randomized residual power from
/// imperfect extinction.
struct PolarizedField {
  Field h{0.0, 0.0};
  Field v{0.0, 0.0};
  double residual_h = 0.0;  ///< photons
  double residual_v = 0.0;  ///< photons
};

struct TxPeriod {
  SymbolRole role = SymbolRole::Idle;
  std::array<PolarizedField, kBinsPerPeriod> bins{};

  PolarizedField& operator[](TimeBin b) { return bins[static_cast<int>(b)]; }
  const PolarizedField& operator[](TimeBin b) const { return bins[static_cast<int>(b)]; }
};

/// One 1 us period per packet symbol. Off bins of the reference path carry
/// reference_photons * 10^(-extinction_db / 10); the Sagnac modulator sits at
/// its dark point between symbols so the signal path carries none.
std::vector<TxPeriod> carve_pulses(const Packet& packet, double extinction_db);

/// Reference pulse only, no encoding.
TxPeriod idle_period(const TxPulseSpec& spec, double extinction_db);

/// CSV: bin_index,role,x_a,p_a,photons
void write_packet_csv(std::ostream& out, const Packet& packet);

}  // namespace cvqkd::tx
