#include "cvqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <tuple>

#include "json.hpp"

#include "cvqkd/error.hpp"

namespace cvqkd::security {

void SecurityInput::validate() const {
  if (!(v_a > 0.0) || !std::isfinite(v_a)) throw DomainError("V_A must be positive");
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("T must lie in (0, 1]");
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("xi must be non-negative");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  if (!(nu_el >= 0.0)) throw DomainError("nu_el must be non-negative");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
}

double chi_line(const SecurityInput& in) { return 1.0 / in.t - 1.0 + in.xi; }

double chi_het(const SecurityInput& in) { return (2.0 - in.eta + 2.0 * in.nu_el) / in.eta; }

double chi_tot(const SecurityInput& in) { return chi_line(in) + chi_het(in) / in.t; }

double g(double x) {
  if (x < 0.0) throw DomainError("g(x) is defined for x >= 0");
  if (x == 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double mutual_information(const SecurityInput& in) {
  in.validate();
  const double ct = chi_tot(in);
  return std::log2((in.v() + ct) / (1.0 + ct));
}

namespace {

std::pair<double, double> eigen_pair(double sum, double product) {
  double disc = sum * sum - 4.0 * product;
  if (disc < 0.0) {
    if (disc < -1e-9 * sum * sum) throw DomainError("negative discriminant in symplectic spectrum");
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  return {std::sqrt((sum + root) / 2.0), std::sqrt(std::max(0.0, (sum - root) / 2.0))};
}

double g_of_lambda(double lambda) {
  const double x = (lambda - 1.0) / 2.0;
  if (x < 0.0) {
    if (x < -1e-9) throw DomainError("symplectic eigenvalue below 1");
    return 0.0;
  }
  return g(x);
}

}  // namespace

HolevoBreakdown holevo_bound(const SecurityInput& in) {
  in.validate();
  const double v = in.v();
  const double t = in.t;
  const double cl = chi_line(in);
  const double ch = chi_het(in);
  const double ct = chi_tot(in);

  HolevoBreakdown h;
  h.a_coef = v * v * (1.0 - 2.0 * t) + 2.0 * t + t * t * (v + cl) * (v + cl);
  h.b_coef = t * t * (v * cl + 1.0) * (v * cl + 1.0);
  const double sqrt_b = std::sqrt(h.b_coef);
  const double denom = t * t * (v + ct) * (v + ct);
  h.c_coef = (h.a_coef * ch * ch + h.b_coef + 1.0 + 2.0 * t * (v * v - 1.0) +
              2.0 * ch * (v * sqrt_b + t * (v + cl))) /
             denom;
  const double d_root = (v + sqrt_b * ch) / (t * (v + ct));
  h.d_coef = d_root * d_root;

  std::tie(h.lambda[0], h.lambda[1]) = eigen_pair(h.a_coef, h.b_coef);
  std::tie(h.lambda[2], h.lambda[3]) = eigen_pair(h.c_coef, h.d_coef);
  h.lambda[4] = 1.0;
  h.chi_be = g_of_lambda(h.lambda[0]) + g_of_lambda(h.lambda[1]) - g_of_lambda(h.lambda[2]) -
             g_of_lambda(h.lambda[3]);
  return h;
}

double asymptotic_rate(const SecurityInput& in) {
  return in.beta * mutual_information(in) - holevo_bound(in).chi_be;
}

FiniteSizeInput FiniteSizeInput::half_split(std::uint64_t n_total) {
  FiniteSizeInput fs;
  fs.m_est = n_total / 2;
  fs.n_key = n_total - fs.m_est;
  return fs;
}

double privacy_amplification_penalty(std::uint64_t n, double eps_bar) {
  if (n == 0) throw DomainError("n must be at least 1");
  if (!(eps_bar > 0.0 && eps_bar < 1.0)) throw DomainError("eps_bar must lie in (0, 1)");
  return 7.0 * std::sqrt(std::log2(2.0 / eps_bar) / static_cast<double>(n));
}

FiniteSizeResult finite_size_rate(const SecurityInput& in, const FiniteSizeInput& fs) {
  in.validate();
  if (fs.n_key < 1 || fs.m_est < 1) throw DomainError("n and m must be at least 1");
  if (!(fs.z_conf >= 0.0)) throw DomainError("confidence parameter must be non-negative");
  const double xi_d = fs.xi_d.value_or(in.nu_el);
  const auto n = static_cast<double>(fs.n_key);
  const auto m = static_cast<double>(fs.m_est);
  const double big_n = n + m;

  FiniteSizeResult r;
  r.i_ab = mutual_information(in);
  r.delta_n = privacy_amplification_penalty(fs.n_key, fs.eps_bar);
  r.t_hat = in.eta * in.t / 2.0;
  r.sigma2_hat = 1.0 + r.t_hat * in.xi + xi_d;
  const double root = std::sqrt(r.t_hat) - fs.z_conf * std::sqrt(r.sigma2_hat / (m * in.v_a));
  r.sigma2_max = r.sigma2_hat + fs.z_conf * r.sigma2_hat * std::sqrt(2.0) / std::sqrt(m);
  if (!(root > 0.0)) {
    r.estimation_failed = true;
    return r;
  }
  r.t_min = root * root;
  r.xi_max = std::max(0.0, (r.sigma2_max - 1.0 - xi_d) / r.t_min);

  SecurityInput worst = in;
  worst.t = 2.0 * r.t_min / in.eta;
  worst.xi = r.xi_max;
  r.chi_be_max = holevo_bound(worst).chi_be;
  r.rate = n / big_n * (in.beta * r.i_ab - r.chi_be_max - r.delta_n);
  return r;
}

double LinkModel::transmission(double distance_km) const {
  if (!(distance_km >= 0.0)) throw DomainError("distance must be non-negative");
  return std::pow(10.0, -atten_db_per_km * distance_km / 10.0);
}

SecurityInput LinkModel::at(double distance_km, double v_a) const {
  SecurityInput in;
  in.v_a = v_a;
  in.t = transmission(distance_km);
  in.xi = phase_noise_mode ? v_a * delta_phi : xi_fixed;
  in.eta = eta;
  in.nu_el = nu_el;
  in.beta = beta;
  return in;
}

std::vector<double> va_grid(double lo, double hi, double step) {
  if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0)) throw DomainError("invalid V_A grid");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) grid.push_back(lo + step * static_cast<double>(i));
  return grid;
}

namespace {

double rate_at(const LinkModel& link, double distance_km, double v_a, const std::optional<FiniteSizeInput>& fs) {
  const SecurityInput in = link.at(distance_km, v_a);
  if (!fs) return asymptotic_rate(in);
  const FiniteSizeResult r = finite_size_rate(in, *fs);
  return r.estimation_failed ? -std::numeric_limits<double>::infinity() : r.rate;
}

}  // namespace

VaOptimum optimize_va(std::span<const double> grid, const LinkModel& link, double distance_km,
                      const std::optional<FiniteSizeInput>& fs) {
  if (grid.empty()) throw DomainError("V_A grid is empty");
  std::size_t best = 0;
  std::vector<double> rates(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rates[i] = rate_at(link, distance_km, grid[i], fs);
    if (rates[i] > rates[best]) best = i;
  }
  VaOptimum opt{grid[best], rates[best], false};

  if (grid.size() > 1) {
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[best + 1 == grid.size() ? best : best + 1];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = rate_at(link, distance_km, c, fs);
    double fd = rate_at(link, distance_km, d, fs);
    for (int iter = 0; iter < 200 && (b - a) > 1e-10 * std::max(1.0, std::abs(b)); ++iter) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = rate_at(link, distance_km, c, fs);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = rate_at(link, distance_km, d, fs);
      }
    }
    const double mid = 0.5 * (a + b);
    const double f_mid = rate_at(link, distance_km, mid, fs);
    if (f_mid > opt.rate) opt = {mid, f_mid, false};
  }
  opt.infeasible = !(opt.rate > 0.0);
  return opt;
}

std::vector<SweepRow> distance_sweep(std::span<const double> distances_km, const LinkModel& link,
                                     std::span<const double> grid, const std::optional<FiniteSizeInput>& fs,
                                     std::optional<double> fixed_va, double symbol_rate) {
  std::vector<SweepRow> rows;
  rows.reserve(distances_km.size());
  for (const double d : distances_km) {
    SweepRow row;
    row.distance_km = d;
    row.v_a = fixed_va ? *fixed_va : optimize_va(grid, link, d, fs).v_a;
    const SecurityInput in = link.at(d, row.v_a);
    row.i_ab = mutual_information(in);
    row.holevo = holevo_bound(in);
    row.r_inf_bps = (in.beta * row.i_ab - row.holevo.chi_be) * symbol_rate;
    if (fs) {
      const FiniteSizeResult r = finite_size_rate(in, *fs);
      row.r_fs_bps = r.rate * symbol_rate;
      row.t_min = r.t_min;
      row.sigma2_max = r.sigma2_max;
      row.n_total = fs->n_total();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "distance_km,v_a,i_ab,chi_be,r_inf_bps,r_fs_bps,t_min,sigma2_max,n_total\n";
  out.precision(12);
  for (const auto& r : rows) {
    out << r.distance_km << ',' << r.v_a << ',' << r.i_ab << ',' << r.holevo.chi_be << ',' << r.r_inf_bps << ','
        << r.r_fs_bps << ',' << r.t_min << ',' << r.sigma2_max << ',' << r.n_total << '\n';
  }
}

void write_sweep_json(std::ostream& out, std::span<const SweepRow> rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["distance_km"] = r.distance_km;
    j["v_a"] = r.v_a;
    j["i_ab"] = r.i_ab;
    j["lambda"] = r.holevo.lambda;
    j["a_coef"] = r.holevo.a_coef;
    j["b_coef"] = r.holevo.b_coef;
    j["c_coef"] = r.holevo.c_coef;
    j["d_coef"] = r.holevo.d_coef;
    j["chi_be"] = r.holevo.chi_be;
    j["r_inf_bps"] = r.r_inf_bps;
    j["r_fs_bps"] = r.r_fs_bps;
    j["t_min"] = r.t_min;
    j["sigma2_max"] = r.sigma2_max;
    j["n_total"] = r.n_total;
    arr.push_back(j);
  }
  out << arr.dump(2) << '\n';
}

}  // namespace cvqkd::security
