#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "cvqkd/channel.hpp"
#include "cvqkd/error.hpp"
#include "cvqkd/recovery.hpp"
#include "cvqkd/transmitter.hpp"

using namespace cvqkd;
using namespace cvqkd::recovery;

namespace {
channel::ChannelParams lossless() {
  channel::ChannelParams p;
  p.distance_km = 0.0;
  p.fixed_loss_db = 0.0;
  return p;
}

QuadSample through_channel(double x, double p, double phi, double delta, TimeBin bin) {
  channel::ChannelState s;
  s.carrier_phase = phi;
  s.delta = delta;
  tx::PolarizedField in;
  const tx::Field a = tx::amplitude_from_quadratures(x, p);
  if (bin == TimeBin::Signal) {
    in.h = a;
  } else {
    in.v = a;
  }
  const auto out = channel::transmit(in, s, lossless(), bin);
  return tx::quadratures_of(bin == TimeBin::Signal ? out.h : out.v);
}

std::vector<RecoveredSymbol> pattern_symbols(std::uint64_t pattern, double amp, double phi, double delta) {
  std::vector<RecoveredSymbol> out;
  const QuadSample ref = through_channel(30.0, 0.0, phi, 0.0, TimeBin::Reference);
  for (std::size_t j = 0; j < tx::kPatternSymbols; ++j) {
    const double s = tx::pattern_sign(pattern, j);
    out.push_back(recover_symbol(through_channel(s * amp, 0.0, phi, delta, TimeBin::Signal), ref));
  }
  return out;
}
}  // namespace

TEST_CASE("extract_phi inverts the channel rotation") {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  for (int i = 0; i < 500; ++i) {
    const double phi = angle(gen);
    CHECK(extract_phi(through_channel(20.0, 0.0, phi, 0.0, TimeBin::Reference)) == doctest::Approx(phi));
  }
  CHECK_THROWS_AS(extract_phi(QuadSample{0.0, 0.0}), RecoveryError);
  CHECK_THROWS_AS(extract_phi(QuadSample{NAN, 1.0}), RecoveryError);
}

TEST_CASE("recovered symbols equal Alice's when delta is zero") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> q(0.0, 4.0);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  for (int i = 0; i < 500; ++i) {
    const double x = q(gen), p = q(gen), phi = angle(gen);
    const auto y = recover_symbol(through_channel(x, p, phi, 0.0, TimeBin::Signal),
                                  through_channel(25.0, 0.0, phi, 0.0, TimeBin::Reference));
    REQUIRE(y.valid);
    CHECK(y.x == doctest::Approx(x).epsilon(1e-12).scale(1.0));
    CHECK(y.p == doctest::Approx(p).epsilon(1e-12).scale(1.0));
  }
  const auto dead = recover_symbol(QuadSample{1.0, 1.0}, QuadSample{0.0, 0.0});
  CHECK_FALSE(dead.valid);
}

TEST_CASE("header and footer patterns recover delta") {
  for (const double delta : {-2.9, -1.0, 0.0, 0.4, 1.7, 3.0}) {
    const auto header = pattern_symbols(tx::kDefaultPattern, 20.0, 0.8, delta);
    const auto footer = pattern_symbols(tx::kDefaultPattern, 20.0, -2.2, delta);
    const DeltaEstimate est = determine_delta(header, footer, tx::kDefaultPattern);
    CHECK(est.accepted);
    CHECK(wrap_angle(est.delta - delta) == doctest::Approx(0.0).scale(1.0));
    CHECK(est.joint_correlation == doctest::Approx(1.0));
    const auto fixed = apply_delta(header, est.delta);
    for (std::size_t j = 0; j < fixed.size(); ++j) {
      CHECK(fixed[j].x == doctest::Approx(20.0 * tx::pattern_sign(tx::kDefaultPattern, j)));
    }
  }
}

TEST_CASE("uncorrelated header is rejected") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> q(0.0, 5.0);
  std::vector<RecoveredSymbol> noise(tx::kPatternSymbols);
  for (auto& y : noise) y.x = q(gen), y.p = q(gen);
  const auto good = pattern_symbols(tx::kDefaultPattern, 20.0, 0.0, 0.3);
  CHECK_FALSE(determine_delta(noise, good, tx::kDefaultPattern).accepted);
  auto broken = good;
  broken[3].valid = false;
  CHECK_FALSE(determine_delta(good, broken, tx::kDefaultPattern).accepted);
}

TEST_CASE("decode_bits reads the ID MSB first") {
  const std::uint64_t id = 0xDEADBEEF01234567ULL;
  const auto symbols = pattern_symbols(id, 20.0, 1.1, -0.6);
  CHECK(decode_bits(symbols, -0.6) == id);
  std::vector<RecoveredSymbol> too_many(65);
  CHECK_THROWS_AS(decode_bits(too_many, 0.0), FramingError);
}
