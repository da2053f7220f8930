#include "cvqkd/recovery.hpp"

#include <cmath>
#include <complex>

#include "cvqkd/error.hpp"

namespace cvqkd::recovery {

double extract_phi(const QuadSample& reference) {
  if (reference.x == 0.0 && reference.p == 0.0) throw RecoveryError("reference sample is exactly zero");
  if (!reference.finite()) throw RecoveryError("reference sample is not finite");
  return std::atan2(-reference.p, reference.x);
}

QuadSample rotate_to_bob_basis(const QuadSample& signal, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {signal.x * c - signal.p * s, signal.x * s + signal.p * c, signal.units};
}

RecoveredSymbol recover_symbol(const QuadSample& signal, const QuadSample& reference) {
  RecoveredSymbol out;
  out.quality = z_value(reference);
  try {
    out.phi_used = extract_phi(reference);
  } catch (const RecoveryError&) {
    out.valid = false;
    return out;
  }
  const QuadSample rotated = rotate_to_bob_basis(signal, out.phi_used);
  out.x = rotated.x;
  out.p = rotated.p;
  return out;
}

std::vector<RecoveredSymbol> recover_symbols(std::span<const QuadSample> signal,
                                             std::span<const QuadSample> reference) {
  if (signal.size() != reference.size()) throw FramingError("signal and reference sequences differ in length");
  std::vector<RecoveredSymbol> out;
  out.reserve(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) out.push_back(recover_symbol(signal[i], reference[i]));
  return out;
}

namespace {

struct PatternSums {
  std::complex<double> weighted{0.0, 0.0};
  double magnitude = 0.0;
  bool valid = true;

  double correlation() const { return magnitude > 0.0 ? std::abs(weighted) / magnitude : 0.0; }
  double delta() const { return -std::arg(weighted); }
};

PatternSums pattern_sums(std::span<const RecoveredSymbol> symbols, std::uint64_t pattern) {
  if (symbols.size() > 64) throw FramingError("pattern fields hold at most 64 symbols");
  PatternSums sums;
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    const auto& y = symbols[j];
    if (!y.valid) {
      sums.valid = false;
      continue;
    }
    const double s = ((pattern >> (63 - j)) & 1u) == 0 ? 1.0 : -1.0;
    sums.weighted += s * std::complex<double>(y.x, y.p);
    sums.magnitude += std::hypot(y.x, y.p);
  }
  return sums;
}

}  // namespace

DeltaEstimate determine_delta(std::span<const RecoveredSymbol> header, std::span<const RecoveredSymbol> footer,
                              std::uint64_t pattern, double threshold) {
  const PatternSums h = pattern_sums(header, pattern);
  const PatternSums f = pattern_sums(footer, pattern);
  DeltaEstimate est;
  est.header_delta = h.delta();
  est.footer_delta = f.delta();
  est.header_correlation = h.correlation();
  est.footer_correlation = f.correlation();

  PatternSums joint;
  joint.weighted = h.weighted + f.weighted;
  joint.magnitude = h.magnitude + f.magnitude;
  est.delta = joint.delta();
  est.joint_correlation = joint.correlation();
  est.accepted = h.valid && f.valid && est.header_correlation >= threshold && est.footer_correlation >= threshold;
  return est;
}

std::vector<RecoveredSymbol> apply_delta(std::span<const RecoveredSymbol> symbols, double delta) {
  std::vector<RecoveredSymbol> out(symbols.begin(), symbols.end());
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  for (auto& y : out) {
    const double x = y.x * c - y.p * s;
    const double p = y.x * s + y.p * c;
    y.x = x;
    y.p = p;
  }
  return out;
}

std::uint64_t decode_bits(std::span<const RecoveredSymbol> symbols, double delta) {
  if (symbols.size() > 64) throw FramingError("at most 64 bits can be decoded at once");
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    const double x = symbols[j].x * c - symbols[j].p * s;
    if (x < 0.0) bits |= std::uint64_t{1} << (63 - j);
  }
  return bits;
}

}  // namespace cvqkd::recovery
