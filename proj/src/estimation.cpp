#include "cvqkd/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "json.hpp"

#include "cvqkd/error.hpp"

namespace cvqkd::estimation {

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::size_t min_pairs) {
  if (x.size() != y.size()) throw FitError("regression inputs differ in length");
  if (x.size() < std::max<std::size_t>(min_pairs, 3)) {
    throw FitError("regression needs at least " + std::to_string(std::max<std::size_t>(min_pairs, 3)) + " pairs");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw FitError("regressor has zero variance");

  LineFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.x_variance = sxx / n;
  fit.y_variance = syy / n;
  const double rss = std::max(0.0, syy - fit.slope * sxy);
  fit.residual_variance = rss / n;
  fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

namespace {

double channel_scale(double t, double eta) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("transmission must lie in (0, 1]");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  return std::sqrt(eta * t / 2.0);
}

KFit to_k(const LineFit& line, double scale) {
  return {line.slope / scale, line.slope_stderr / scale, line.intercept, line};
}

std::vector<double> centered(std::span<const double> v) {
  double mean = 0.0;
  for (double a : v) mean += a;
  mean /= static_cast<double>(v.size());
  std::vector<double> out(v.begin(), v.end());
  for (double& a : out) a -= mean;
  return out;
}

}  // namespace

KFit fit_k(std::span<const double> digital, std::span<const double> measured, double t, double eta) {
  return to_k(fit_line(digital, measured), channel_scale(t, eta));
}

PooledFit fit_k_pooled(std::span<const double> digital_x, std::span<const double> digital_p,
                       std::span<const double> measured_x, std::span<const double> measured_p, double t, double eta) {
  const double scale = channel_scale(t, eta);
  PooledFit out;
  out.x = to_k(fit_line(digital_x, measured_x), scale);
  out.p = to_k(fit_line(digital_p, measured_p), scale);

  std::vector<double> d = centered(digital_x);
  std::vector<double> m = centered(measured_x);
  const std::vector<double> dp = centered(digital_p);
  const std::vector<double> mp = centered(measured_p);
  d.insert(d.end(), dp.begin(), dp.end());
  m.insert(m.end(), mp.begin(), mp.end());
  out.pooled = to_k(fit_line(d, m), scale);

  const double combined = std::hypot(out.x.k_stderr, out.p.k_stderr);
  out.quadratures_agree = std::abs(out.x.k_hat - out.p.k_hat) <= 2.0 * combined;
  return out;
}

double excess_noise(double v_b, double v_a, double t, double eta, double nu_e) {
  channel_scale(t, eta);
  if (nu_e < 0.0) throw DomainError("nu_e must be non-negative");
  return 2.0 * (v_b - 1.0 - nu_e) / (t * eta) - v_a;
}

double predicted_v_b(double v_a, double xi, double t, double eta, double nu_e) {
  return t * eta / 2.0 * (v_a + xi) + 1.0 + nu_e;
}

double estimate_transmission(double slope, double k, double eta) {
  if (!(k > 0.0) || !(eta > 0.0)) throw DomainError("k and eta must be positive");
  return 2.0 * slope * slope / (eta * k * k);
}

EstimationResult estimate_block(std::span<const double> digital_x, std::span<const double> digital_p,
                                std::span<const double> measured_x, std::span<const double> measured_p, double t,
                                double eta, double nu_e) {
  const PooledFit fit = fit_k_pooled(digital_x, digital_p, measured_x, measured_p, t, eta);
  EstimationResult r;
  r.k_hat = fit.pooled.k_hat;
  r.k_stderr = fit.pooled.k_stderr;
  r.digital_variance = fit.pooled.line.x_variance;
  r.v_a_hat = r.k_hat * r.k_hat * r.digital_variance;
  r.v_b = fit.pooled.line.y_variance;
  r.residual_variance = fit.pooled.line.residual_variance;
  r.xi_hat = excess_noise(r.v_b, r.v_a_hat, t, eta, nu_e);
  r.sample_count = fit.pooled.line.n;
  r.quadratures_agree = fit.quadratures_agree;
  const double xi_stderr =
      2.0 / (t * eta) * r.residual_variance * std::sqrt(2.0 / static_cast<double>(r.sample_count));
  r.xi_nonphysical = r.xi_hat < -3.0 * xi_stderr;
  return r;
}

AveragedEstimate average_results(std::span<const EstimationResult> per_packet) {
  if (per_packet.empty()) throw FitError("no packets to average");
  AveragedEstimate avg;
  avg.packets = per_packet.size();
  const auto n = static_cast<double>(per_packet.size());
  EstimationResult& m = avg.mean;
  m.quadratures_agree = true;
  for (const auto& r : per_packet) {
    m.k_hat += r.k_hat / n;
    m.k_stderr += r.k_stderr * r.k_stderr;
    m.v_a_hat += r.v_a_hat / n;
    m.digital_variance += r.digital_variance / n;
    m.xi_hat += r.xi_hat / n;
    m.v_b += r.v_b / n;
    m.residual_variance += r.residual_variance / n;
    m.sample_count += r.sample_count;
    m.quadratures_agree = m.quadratures_agree && r.quadratures_agree;
  }
  m.k_stderr = std::sqrt(m.k_stderr) / n;
  if (per_packet.size() > 1) {
    double ss = 0.0;
    for (const auto& r : per_packet) ss += (r.xi_hat - m.xi_hat) * (r.xi_hat - m.xi_hat);
    avg.xi_stderr = std::sqrt(ss / (n - 1.0) / n);
  }
  m.xi_nonphysical = avg.packets > 1 && m.xi_hat < -3.0 * avg.xi_stderr;
  return avg;
}

PhaseNoiseFit fit_phase_noise(std::span<const PhaseNoisePoint> points) {
  std::set<double> distinct;
  for (const auto& pt : points) distinct.insert(pt.v_a);
  if (distinct.size() < 3) throw FitError("phase-noise fit needs at least three distinct V_A values");

  const bool weighted = std::all_of(points.begin(), points.end(), [](const auto& pt) { return pt.xi_stderr > 0.0; });
  double swvv = 0.0, swvx = 0.0;
  for (const auto& pt : points) {
    const double w = weighted ? 1.0 / (pt.xi_stderr * pt.xi_stderr) : 1.0;
    swvv += w * pt.v_a * pt.v_a;
    swvx += w * pt.v_a * pt.xi;
  }
  if (!(swvv > 0.0)) throw FitError("all V_A values are zero");

  PhaseNoiseFit fit;
  fit.delta_phi = swvx / swvv;
  if (weighted) {
    fit.stderr = std::sqrt(1.0 / swvv);
  } else {
    double rss = 0.0;
    for (const auto& pt : points) {
      const double r = pt.xi - fit.delta_phi * pt.v_a;
      rss += r * r;
    }
    fit.stderr = std::sqrt(rss / static_cast<double>(points.size() - 1) / swvv);
  }
  return fit;
}

void write_estimation_json(std::ostream& out, const EstimationResult& r, const std::string& config_json,
                           std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["k_hat"] = r.k_hat;
  j["k_stderr"] = r.k_stderr;
  j["v_a_hat"] = r.v_a_hat;
  j["digital_variance"] = r.digital_variance;
  j["xi_hat"] = r.xi_hat;
  j["v_b"] = r.v_b;
  j["residual_variance"] = r.residual_variance;
  j["delta_phi_hat"] = r.delta_phi_hat;
  j["sample_count"] = r.sample_count;
  j["quadratures_agree"] = r.quadratures_agree;
  j["xi_nonphysical"] = r.xi_nonphysical;
  j["config"] = nlohmann::ordered_json::parse(config_json);
  j["seed"] = seed;
  out << j.dump(2) << '\n';
}

}  // namespace cvqkd::estimation
