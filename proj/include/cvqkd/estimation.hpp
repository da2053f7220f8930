#pragma once

// Parameter estimation after a run: regression of Bob's quadratures on
// Alice's digital values for k (and V_A = k^2 * digital variance), excess
// noise from Bob's variance, and the zero-intercept phase-noise fit
// xi = V_A * dphi.
//
// xi is referenced to Alice's output: V_B = (T eta / 2)(V_A + xi) + 1 + nu_e.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cvqkd::estimation {

inline constexpr std::size_t kMinRegressionPairs = 1000;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double residual_variance = 0.0;  ///< mean squared residual (divided by n)
  double x_variance = 0.0;         ///< sample variance of x (divided by n)
  double y_variance = 0.0;         ///< sample variance of y (divided by n)
  std::size_t n = 0;
};

/// Ordinary least squares y = slope * x + intercept. Throws FitError for
/// mismatched lengths, fewer than min_pairs pairs or zero variance in x.
LineFit fit_line(std::span<const double> x, std::span<const double> y, std::size_t min_pairs = kMinRegressionPairs);

struct KFit {
  double k_hat = 0.0;
  double k_stderr = 0.0;
  double x0 = 0.0;  ///< fitted offset, expected to average to zero
  LineFit line;
};

/// X_B = k sqrt(eta T / 2) digital + X_0; returns the slope divided by
/// sqrt(eta T / 2).
KFit fit_k(std::span<const double> digital, std::span<const double> measured, double t, double eta);

/// Both quadratures, each centered on its own mean, pooled into one fit.
struct PooledFit {
  KFit x;
  KFit p;
  KFit pooled;
  bool quadratures_agree = true;  ///< |k_x - k_p| within 2 combined standard errors
};

PooledFit fit_k_pooled(std::span<const double> digital_x, std::span<const double> digital_p,
                       std::span<const double> measured_x, std::span<const double> measured_p, double t, double eta);

/// xi = 2 (V_B - 1 - nu_e) / (T eta) - V_A.
double excess_noise(double v_b, double v_a, double t, double eta, double nu_e);

/// V_B predicted from the model for given V_A and xi.
double predicted_v_b(double v_a, double xi, double t, double eta, double nu_e);

/// Alternate mode: T from the fitted slope with k known, T = 2 slope^2 / (eta k^2).
double estimate_transmission(double slope, double k, double eta);

struct EstimationResult {
  double k_hat = 0.0;
  double k_stderr = 0.0;
  double v_a_hat = 0.0;  ///< k_hat^2 * digital variance
  double digital_variance = 0.0;
  double xi_hat = 0.0;
  double v_b = 0.0;
  double residual_variance = 0.0;
  double delta_phi_hat = 0.0;  ///< set by the phase-noise fit, 0 for a single packet
  std::size_t sample_count = 0;
  bool quadratures_agree = true;
  bool xi_nonphysical = false;  ///< xi below zero by more than 3 standard errors
};

/// One packet (or any block) of payload: digital values and Bob's recovered
/// SNU quadratures, with T, eta and nu_e known.
EstimationResult estimate_block(std::span<const double> digital_x, std::span<const double> digital_p,
                                std::span<const double> measured_x, std::span<const double> measured_p, double t,
                                double eta, double nu_e);

/// Arithmetic mean of per-packet results field by field; xi_nonphysical and
/// quadratures_agree are re-derived from the averaged values.
struct AveragedEstimate {
  EstimationResult mean;
  double xi_stderr = 0.0;  ///< scatter of per-packet xi over sqrt(count)
  std::size_t packets = 0;
};

AveragedEstimate average_results(std::span<const EstimationResult> per_packet);

struct PhaseNoisePoint {
  double v_a = 0.0;
  double xi = 0.0;
  double xi_stderr = 0.0;  ///< 0 means unweighted
};

struct PhaseNoiseFit {
  double delta_phi = 0.0;
  double stderr = 0.0;
};

/// Zero-intercept weighted least squares xi = dphi * v_a. Weights are
/// 1 / xi_stderr^2 when every point has a positive stderr, else uniform.
/// Throws FitError with fewer than three distinct V_A values.
PhaseNoiseFit fit_phase_noise(std::span<const PhaseNoisePoint> points);

/// JSON record of one estimate; config_json must be a JSON object text.
void write_estimation_json(std::ostream& out, const EstimationResult& result, const std::string& config_json,
                           std::uint64_t seed);

}  // namespace cvqkd::estimation
