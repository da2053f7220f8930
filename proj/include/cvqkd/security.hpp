#pragma once

// Secret key rates for Gaussian-modulated coherent states with heterodyne
// detection and a trusted, noisy receiver: mutual information, the Holevo
// bound from five symplectic eigenvalues, the asymptotic rate, worst-case
// finite-size rates and modulation-variance optimization.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace cvqkd::security {

struct SecurityInput {
  double v_a = 1.0;  ///< modulation variance, SNU
  double t = 1.0;    ///< channel transmission
  double xi = 0.0;   ///< excess noise referred to the channel input, SNU
  double eta = 1.0;  ///< detection efficiency
  double nu_el = 0.0;  ///< electrical noise, SNU
  double beta = 1.0;   ///< reconciliation efficiency

  double v() const { return v_a + 1.0; }
  void validate() const;
};

/// chi_line = 1/T - 1 + xi
double chi_line(const SecurityInput& in);
/// chi_het = (2 - eta + 2 nu_el) / eta
double chi_het(const SecurityInput& in);
/// chi_tot = chi_line + chi_het / T
double chi_tot(const SecurityInput& in);

/// g(x) = (x + 1) log2(x + 1) - x log2(x), with g(0) = 0.
double g(double x);

/// I_AB = log2((V + chi_tot) / (1 + chi_tot)), bits per symbol.
double mutual_information(const SecurityInput& in);

struct HolevoBreakdown {
  std::array<double, 5> lambda{1.0, 1.0, 1.0, 1.0, 1.0};
  double a_coef = 0.0;
  double b_coef = 0.0;
  double c_coef = 0.0;
  double d_coef = 0.0;
  double chi_be = 0.0;
};

/// Throws DomainError when a discriminant is below -1e-9 (relative to the
/// squared coefficient); smaller negatives are clamped to zero.
HolevoBreakdown holevo_bound(const SecurityInput& in);

/// beta I_AB - chi_BE; may be negative.
double asymptotic_rate(const SecurityInput& in);

struct FiniteSizeInput {
  std::uint64_t n_key = 0;  ///< n
  std::uint64_t m_est = 0;  ///< m
  double z_conf = 6.5;
  double eps_bar = 1e-10;
  double eps_pe = 1e-10;
  /// Detector noise in the Bob-referenced variance; defaults to nu_el.
  std::optional<double> xi_d;
  double symbol_rate = 5e4;  ///< symbols / s

  std::uint64_t n_total() const { return n_key + m_est; }
  /// n = m = N / 2 (for odd N the extra symbol goes to the key).
  static FiniteSizeInput half_split(std::uint64_t n_total);
};

/// Delta(n) = 7 sqrt(log2(2 / eps_bar) / n).
double privacy_amplification_penalty(std::uint64_t n, double eps_bar);

struct FiniteSizeResult {
  double rate = 0.0;  ///< bits per symbol over all N symbols
  double i_ab = 0.0;
  double chi_be_max = 0.0;
  double delta_n = 0.0;
  double t_hat = 0.0;  ///< eta T / 2
  double sigma2_hat = 0.0;
  double t_min = 0.0;
  double sigma2_max = 0.0;
  double xi_max = 0.0;
  bool estimation_failed = false;  ///< T_min collapsed to zero
};

/// R = (n / N)(beta I_AB - chi_BE^max - Delta(n)). I_AB uses the expected
/// T and xi; chi_BE^max uses T = 2 T_min / eta and
/// xi_max = (sigma2_max - 1 - xi_d) / T_min, where
///   T_hat = eta T / 2, sigma2_hat = 1 + T_hat xi + xi_d,
///   T_min = (sqrt(T_hat) - z sqrt(sigma2_hat / (m V_A)))^2,
///   sigma2_max = sigma2_hat + z sigma2_hat sqrt(2) / sqrt(m).
FiniteSizeResult finite_size_rate(const SecurityInput& in, const FiniteSizeInput& fs);

/// Link description used for distance sweeps; xi = V_A * delta_phi when
/// phase-noise mode is on, else xi_fixed.
struct LinkModel {
  double atten_db_per_km = 0.2;
  double eta = 0.42;
  double nu_el = 0.175;
  double beta = 0.95;
  double delta_phi = 0.034;
  bool phase_noise_mode = true;
  double xi_fixed = 0.0;

  double transmission(double distance_km) const;
  SecurityInput at(double distance_km, double v_a) const;
};

struct VaOptimum {
  double v_a = 0.0;
  double rate = 0.0;  ///< bits per symbol
  bool infeasible = false;  ///< best rate is not positive
};

/// Uniform grid [lo, hi] with the given step.
std::vector<double> va_grid(double lo, double hi, double step);

/// Grid search followed by golden-section refinement between the neighbors
/// of the best grid point. With fs set, the finite-size rate is maximized.
VaOptimum optimize_va(std::span<const double> grid, const LinkModel& link, double distance_km,
                      const std::optional<FiniteSizeInput>& fs = std::nullopt);

struct SweepRow {
  double distance_km = 0.0;
  double v_a = 0.0;
  double i_ab = 0.0;
  HolevoBreakdown holevo;
  double r_inf_bps = 0.0;
  double r_fs_bps = 0.0;
  double t_min = 0.0;
  double sigma2_max = 0.0;
  std::uint64_t n_total = 0;
};

/// One row per distance; V_A optimized for the finite-size rate when fs is
/// set (asymptotic otherwise), or fixed when fixed_va is set.
std::vector<SweepRow> distance_sweep(std::span<const double> distances_km, const LinkModel& link,
                                     std::span<const double> grid, const std::optional<FiniteSizeInput>& fs,
                                     std::optional<double> fixed_va, double symbol_rate = 5e4);

/// CSV: distance_km,v_a,i_ab,chi_be,r_inf_bps,r_fs_bps,t_min,sigma2_max,n_total
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_sweep_json(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace cvqkd::security
