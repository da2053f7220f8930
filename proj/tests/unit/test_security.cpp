#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "cvqkd/error.hpp"
#include "cvqkd/security.hpp"
#include "symplectic_oracle.hpp"

using namespace cvqkd;
using namespace cvqkd::security;

// Reference values below were computed independently at 40 significant digits.

namespace {
SecurityInput operating_point() { return {25.0, std::pow(10.0, -0.8), 0.85, 0.42, 0.175, 0.95}; }
SecurityInput ten_km() { return {2.0, std::pow(10.0, -0.2), 2.0 * 0.034, 0.42, 0.175, 0.95}; }
}  // namespace

TEST_CASE("g function") {
  CHECK(g(0.0) == 0.0);
  CHECK(g(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g(0.5) == doctest::Approx(1.3774437510817343).epsilon(1e-14));
  CHECK_THROWS_AS(g(-0.1), DomainError);
}

TEST_CASE("frozen values at the 8 dB operating point") {
  const SecurityInput in = operating_point();
  CHECK(mutual_information(in) == doctest::Approx(0.7582986786542461).epsilon(1e-12));
  const auto h = holevo_bound(in);
  CHECK(h.lambda[0] == doctest::Approx(22.060779067822448).epsilon(1e-12));
  CHECK(h.lambda[1] == doctest::Approx(1.1577279703344262).epsilon(1e-12));
  CHECK(h.lambda[2] == doctest::Approx(13.535308452845148).epsilon(1e-12));
  CHECK(h.lambda[3] == doctest::Approx(1.092824861467229).epsilon(1e-12));
  CHECK(h.lambda[4] == 1.0);
  CHECK(h.chi_be == doctest::Approx(0.83865608392508581).epsilon(1e-12));
  CHECK(asymptotic_rate(in) == doctest::Approx(-0.11827233920355201).epsilon(1e-11));
}

TEST_CASE("frozen values at 10 km") {
  const SecurityInput in = ten_km();
  CHECK(mutual_information(in) == doctest::Approx(0.29138834530832317).epsilon(1e-12));
  const auto h = holevo_bound(in);
  CHECK(h.lambda[0] == doctest::Approx(1.7574197022370729).epsilon(1e-12));
  CHECK(h.lambda[1] == doctest::Approx(1.0622394906221125).epsilon(1e-12));
  CHECK(h.lambda[2] == doctest::Approx(1.6226875641613169).epsilon(1e-12));
  CHECK(h.lambda[3] == doctest::Approx(1.0340955161987031).epsilon(1e-12));
  CHECK(h.chi_be == doctest::Approx(0.2088020708580411).epsilon(1e-11));
  CHECK(asymptotic_rate(in) == doctest::Approx(0.068016857184865904).epsilon(1e-11));
  CHECK(LinkModel{}.at(10.0, 2.0).xi == doctest::Approx(in.xi));
  CHECK(LinkModel{}.transmission(10.0) == doctest::Approx(in.t));
}

TEST_CASE("frozen finite-size values at 10 km, n = m = 4.5e8") {
  FiniteSizeInput fs;
  fs.n_key = 450000000;
  fs.m_est = 450000000;
  const auto r = finite_size_rate(ten_km(), fs);
  CHECK_FALSE(r.estimation_failed);
  CHECK(r.t_min == doctest::Approx(0.13232946150522262).epsilon(1e-11));
  CHECK(r.sigma2_max == doctest::Approx(1.1845231419098915).epsilon(1e-12));
  CHECK(r.xi_max == doctest::Approx(0.071965394565711442).epsilon(1e-9));
  CHECK(r.chi_be_max == doctest::Approx(0.21175310897476083).epsilon(1e-10));
  CHECK(r.delta_n == doctest::Approx(0.0019303107213864747).epsilon(1e-12));
  CHECK(r.rate == doctest::Approx(0.031567754173379852).epsilon(1e-9));
  CHECK(privacy_amplification_penalty(1000000, 1e-10) == doctest::Approx(0.04094807402668418).epsilon(1e-13));
}

TEST_CASE("lossless noiseless link: I_AB = log2(1 + V_A / 2)") {
  const SecurityInput in{3.0, 1.0, 0.0, 1.0, 0.0, 1.0};
  CHECK(mutual_information(in) == doctest::Approx(1.3219280948873623).epsilon(1e-14));
}

TEST_CASE("closed form agrees with the covariance-matrix oracle") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> va(0.5, 50.0), t(0.01, 1.0), xi(0.0, 0.2), eta(0.2, 0.99), nu(0.0, 0.5);
  for (int k = 0; k < 100; ++k) {
    const SecurityInput in{va(gen), t(gen), xi(gen), eta(gen), nu(gen), 0.95};
    const auto h = holevo_bound(in);
    const auto o = cvqkd::testing::holevo_oracle(in.v_a, in.t, in.xi, in.eta, in.nu_el);
    CHECK(h.lambda[0] == doctest::Approx(o.ab[0]).epsilon(1e-9));
    CHECK(h.lambda[1] == doctest::Approx(o.ab[1]).epsilon(1e-9));
    CHECK(h.lambda[2] == doctest::Approx(o.conditional[0]).epsilon(1e-9));
    CHECK(h.lambda[3] == doctest::Approx(o.conditional[1]).epsilon(1e-9));
    CHECK(o.conditional[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(h.chi_be == doctest::Approx(o.chi_be).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("symplectic eigenvalues of a thermal state") {
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Identity(4, 4);
  gamma(0, 0) = gamma(1, 1) = 3.0;
  const auto ev = cvqkd::testing::symplectic_eigenvalues(gamma);
  CHECK(ev(0) == doctest::Approx(3.0));
  CHECK(ev(1) == doctest::Approx(1.0));
}

TEST_CASE("rate decreases with excess noise and distance") {
  const LinkModel link;
  double previous = 1e9;
  for (double d = 0.0; d <= 40.0; d += 2.0) {
    const double r = asymptotic_rate(link.at(d, 2.0));
    CHECK(r <= previous);
    previous = r;
  }
  SecurityInput in = ten_km();
  const double base = asymptotic_rate(in);
  in.xi *= 2.0;
  CHECK(asymptotic_rate(in) < base);
}

TEST_CASE("finite-size rate approaches the asymptotic rate from below") {
  const SecurityInput in = ten_km();
  const double r_inf = asymptotic_rate(in);
  double previous = -1e9;
  for (double n : {1e8, 1e9, 1e10, 1e11, 1e12}) {
    const auto r = finite_size_rate(in, FiniteSizeInput::half_split(static_cast<std::uint64_t>(n)));
    CHECK(r.rate < r_inf);
    CHECK(r.rate > previous);
    previous = r.rate;
  }
}

TEST_CASE("estimation failure and invalid inputs") {
  FiniteSizeInput tiny;
  tiny.n_key = 10;
  tiny.m_est = 10;
  const auto r = finite_size_rate(ten_km(), tiny);
  CHECK(r.estimation_failed);
  CHECK(r.rate <= 0.0);

  SecurityInput bad = ten_km();
  bad.t = 1.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = ten_km();
  bad.v_a = -1.0;
  CHECK_THROWS_AS(mutual_information(bad), DomainError);
  CHECK(FiniteSizeInput::half_split(11).n_key == 6);
  CHECK(FiniteSizeInput::half_split(11).m_est == 5);
}

TEST_CASE("optimized V_A beats every grid point") {
  const LinkModel link;
  const auto grid = va_grid(0.05, 10.0, 0.05);
  CHECK(grid.size() == 200);
  for (double d : {10.0, 20.0, 30.0, 40.0}) {
    const VaOptimum best = optimize_va(grid, link, d);
    for (double v : grid) CHECK(best.rate >= asymptotic_rate(link.at(d, v)) - 1e-15);
    CHECK_FALSE(best.infeasible);
  }
}

TEST_CASE("sweep output headers") {
  const LinkModel link;
  const std::vector<double> distances{0.0, 10.0};
  const auto grid = va_grid(0.5, 5.0, 0.5);
  const auto rows = distance_sweep(distances, link, grid, std::nullopt, std::nullopt);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].r_inf_bps > rows[1].r_inf_bps);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  CHECK(csv.str().rfind("distance_km,v_a,i_ab,chi_be,r_inf_bps,r_fs_bps,t_min,sigma2_max,n_total\n", 0) == 0);
}
