#include <cmath>
#include <random>

#include "doctest.h"

#include "cvqkd/channel.hpp"
#include "cvqkd/error.hpp"

using namespace cvqkd;
using namespace cvqkd::channel;

namespace {
bool is_unitary(const Jones& u) {
  const double c1 = std::norm(u.hh) + std::norm(u.vh);
  const double c2 = std::norm(u.hv) + std::norm(u.vv);
  const auto dot = std::conj(u.hh) * u.hv + std::conj(u.vh) * u.vv;
  return std::abs(c1 - 1.0) < 1e-12 && std::abs(c2 - 1.0) < 1e-12 && std::abs(dot) < 1e-12;
}
}  // namespace

TEST_CASE("loop-back link loses 8 dB") {
  ChannelParams p;
  CHECK(p.loss_db() == doctest::Approx(8.0));
  CHECK(p.transmission() == doctest::Approx(std::pow(10.0, -0.8)));
  p.distance_km = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("polarization unitaries stay unitary") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> a(-7.0, 7.0);
  for (int i = 0; i < 200; ++i) {
    CHECK(is_unitary(polarization_unitary({a(gen), a(gen), a(gen)})));
    CHECK(is_unitary(rotation_x(a(gen)) * rotation_y(a(gen)) * rotation_z(a(gen))));
  }
}

TEST_CASE("transmit rotates quadratures as X cos + P sin") {
  ChannelParams p;
  p.pol_drift_rate = 0.0;
  ChannelState s;
  s.carrier_phase = 0.3;
  s.delta = 0.2;
  tx::PolarizedField in;
  in.h = tx::amplitude_from_quadratures(4.0, -2.0);
  const double theta = 0.5;  // phi + delta on signal-path bins
  const auto out = transmit(in, s, p, TimeBin::Signal);
  const QuadSample q = tx::quadratures_of(out.h);
  const double st = std::sqrt(p.transmission());
  CHECK(q.x == doctest::Approx(st * (4.0 * std::cos(theta) - 2.0 * std::sin(theta))));
  CHECK(q.p == doctest::Approx(st * (-2.0 * std::cos(theta) - 4.0 * std::sin(theta))));
  // Reference-path bins see phi only.
  tx::PolarizedField ref;
  ref.v = {10.0, 0.0};
  const auto r = transmit(ref, s, p, TimeBin::Reference);
  CHECK(std::arg(r.v) == doctest::Approx(-0.3));
  CHECK(std::norm(r.v) == doctest::Approx(100.0 * p.transmission()));
}

TEST_CASE("advance is reproducible and diffuses at the configured rate") {
  ChannelParams p;
  p.delta_drift_rate = 0.0;
  rng::NoiseSource a(9), b(9);
  ChannelState sa, sb;
  double sum_sq = 0.0;
  const int n = 20000;
  const double dt = 1e-6;
  for (int i = 0; i < n; ++i) {
    const ChannelState next = advance(sa, dt, p, a);
    const double step = next.carrier_phase - sa.carrier_phase;
    sum_sq += wrap_angle(step) * wrap_angle(step);
    sa = next;
    sb = advance(sb, dt, p, b);
  }
  CHECK(sa.carrier_phase == sb.carrier_phase);
  CHECK(sum_sq / n == doctest::Approx(p.carrier_diffusion * dt).epsilon(0.05));
}

TEST_CASE("phase jitter has the requested variance") {
  rng::NoiseSource noise(12);
  double s = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double j = draw_phase_jitter(0.02, noise);
    s += j * j;
  }
  CHECK(s / n == doctest::Approx(0.02).epsilon(0.02));
  CHECK(draw_phase_jitter(0.0, noise) == 0.0);
}
