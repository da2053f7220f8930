#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "cvqkd/error.hpp"
#include "cvqkd/estimation.hpp"

using namespace cvqkd;
using namespace cvqkd::estimation;

TEST_CASE("fit_line is exact on a noiseless line") {
  std::vector<double> x, y;
  for (int i = 0; i < 2000; ++i) {
    x.push_back(0.01 * i - 3.0);
    y.push_back(2.5 * x.back() - 0.75);
  }
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.residual_variance < 1e-20);
  CHECK(f.n == 2000);
}

TEST_CASE("fit_line rejects degenerate input") {
  std::vector<double> x(2000, 1.0), y(2000, 2.0);
  CHECK_THROWS_AS(fit_line(x, y), FitError);
  x[0] = 2.0;
  CHECK_THROWS_AS(fit_line(std::span(x).first(999), std::span(y).first(999)), FitError);
  CHECK_THROWS_AS(fit_line(std::span(x).first(1500), y), FitError);
}

TEST_CASE("excess noise inverts the V_B model") {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> va(0.5, 40.0), xi(0.0, 2.0), t(0.01, 1.0), eta(0.2, 1.0), nu(0.0, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const double a = va(gen), x = xi(gen), tt = t(gen), e = eta(gen), n = nu(gen);
    CHECK(excess_noise(predicted_v_b(a, x, tt, e, n), a, tt, e, n) == doctest::Approx(x).scale(1.0).epsilon(1e-10));
  }
  CHECK(predicted_v_b(4.0, 0.0, 1.0, 1.0, 0.0) == doctest::Approx(3.0));
  CHECK(estimate_transmission(std::sqrt(0.42 * 0.3 / 2.0) * 0.05, 0.05, 0.42) == doctest::Approx(0.3));
}

TEST_CASE("estimate_block recovers k, V_A and xi from synthetic data") {
  const double k = 0.05, t = 0.25, eta = 0.42, nu = 0.175, xi = 0.4;
  const double dig_sd = 100.0;
  std::mt19937_64 gen(11);
  std::normal_distribution<double> d(0.0, dig_sd), unit(0.0, 1.0);
  const std::size_t n = 200000;
  std::vector<double> dx(n), dp(n), mx(n), mp(n);
  const double gain = std::sqrt(eta * t / 2.0);
  const double noise_sd = std::sqrt(1.0 + nu + eta * t * xi / 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = d(gen);
    dp[i] = d(gen);
    mx[i] = gain * k * dx[i] + noise_sd * unit(gen);
    mp[i] = gain * k * dp[i] + noise_sd * unit(gen);
  }
  const EstimationResult r = estimate_block(dx, dp, mx, mp, t, eta, nu);
  const double v_a = k * k * dig_sd * dig_sd;
  CHECK(r.k_hat == doctest::Approx(k).epsilon(0.01));
  CHECK(r.v_a_hat == doctest::Approx(v_a).epsilon(0.02));
  CHECK(r.v_b == doctest::Approx(predicted_v_b(v_a, xi, t, eta, nu)).epsilon(0.01));
  CHECK(r.xi_hat == doctest::Approx(xi).scale(1.0).epsilon(0.15));
  CHECK(r.quadratures_agree);
  CHECK_FALSE(r.xi_nonphysical);
  CHECK(r.sample_count == 2 * n);

  std::ostringstream json;
  write_estimation_json(json, r, "{}", 42);
  CHECK(json.str().find("\"seed\"") != std::string::npos);
}

TEST_CASE("phase-noise fit through the origin") {
  std::vector<PhaseNoisePoint> pts;
  for (double v : {5.0, 10.0, 15.0, 20.0, 25.0}) pts.push_back({v, 0.034 * v, 0.0});
  const PhaseNoiseFit f = fit_phase_noise(pts);
  CHECK(f.delta_phi == doctest::Approx(0.034));
  CHECK(f.stderr == doctest::Approx(0.0).scale(1.0));

  // Weighted: the precise point dominates.
  std::vector<PhaseNoisePoint> w{{5.0, 0.5, 1e-4}, {10.0, 0.0, 10.0}, {20.0, 0.0, 10.0}};
  CHECK(fit_phase_noise(w).delta_phi == doctest::Approx(0.1).epsilon(1e-3));

  std::vector<PhaseNoisePoint> two{{5.0, 0.1, 0.0}, {10.0, 0.2, 0.0}, {10.0, 0.2, 0.0}};
  CHECK_THROWS_AS(fit_phase_noise(two), FitError);
}

TEST_CASE("averaging per-packet results") {
  EstimationResult a, b;
  a.k_hat = 1.0;
  b.k_hat = 3.0;
  a.xi_hat = 0.1;
  b.xi_hat = 0.3;
  const std::vector<EstimationResult> v{a, b};
  const auto avg = average_results(v);
  CHECK(avg.packets == 2);
  CHECK(avg.mean.k_hat == doctest::Approx(2.0));
  CHECK(avg.mean.xi_hat == doctest::Approx(0.2));
  CHECK(avg.xi_stderr > 0.0);
  CHECK_THROWS_AS(average_results({}), FitError);
}
