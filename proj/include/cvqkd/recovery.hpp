#pragma once

// Two-stage carrier recovery. The fast phase phi comes from each period's
// reference pulse; the slow signal/reference offset delta comes from the
// known header and footer pattern of a packet.

#include <cstdint>
#include <span>
#include <vector>

#include "cvqkd/core.hpp"

namespace cvqkd::recovery {

/// Four-quadrant angle of (X_R, -P_R). Throws RecoveryError for (0, 0).
double extract_phi(const QuadSample& reference);

/// X' = X cos(phi) - P sin(phi), P' = X sin(phi) + P cos(phi).
QuadSample rotate_to_bob_basis(const QuadSample& signal, double phi);

struct RecoveredSymbol {
  double x = 0.0;  ///< X_S', SNU
  double p = 0.0;  ///< P_S', SNU
  double phi_used = 0.0;
  double quality = 0.0;  ///< reference Z the phase was taken from
  bool valid = true;
};

/// Per-period recovery; a dead reference marks only that symbol invalid.
RecoveredSymbol recover_symbol(const QuadSample& signal, const QuadSample& reference);
std::vector<RecoveredSymbol> recover_symbols(std::span<const QuadSample> signal,
                                             std::span<const QuadSample> reference);

struct DeltaEstimate {
  double delta = 0.0;  ///< joint header + footer estimate
  double header_delta = 0.0;
  double footer_delta = 0.0;
  double header_correlation = 0.0;
  double footer_correlation = 0.0;
  double joint_correlation = 0.0;
  bool accepted = false;
};

/// Pattern correlation |sum s_j y_j| / sum |y_j| of phi-corrected symbols y_j
/// against the +-1 pattern s_j, and the offset delta = -arg(sum s_j y_j).
/// Rejects when either header or footer correlation is below the threshold
/// or any of their symbols is invalid.
DeltaEstimate determine_delta(std::span<const RecoveredSymbol> header, std::span<const RecoveredSymbol> footer,
                              std::uint64_t pattern, double threshold = 0.5);

/// Removes the residual rotation: rotates every symbol by +delta.
std::vector<RecoveredSymbol> apply_delta(std::span<const RecoveredSymbol> symbols, double delta);

/// Reads binary-phase symbols (bit 1 where the delta-corrected X is
/// negative), most significant bit first.
std::uint64_t decode_bits(std::span<const RecoveredSymbol> symbols, double delta);

}  // namespace cvqkd::recovery
