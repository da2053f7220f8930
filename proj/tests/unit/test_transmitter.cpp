#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "cvqkd/error.hpp"
#include "cvqkd/transmitter.hpp"

using namespace cvqkd;
using namespace cvqkd::tx;

TEST_CASE("quadrature convention X = 2 Re alpha, P = 2 Im alpha") {
  const Field a = amplitude_from_quadratures(2.0, -4.0);
  CHECK(a.real() == 1.0);
  CHECK(a.imag() == -2.0);
  const QuadSample q = quadratures_of(a);
  CHECK(q.x == 2.0);
  CHECK(q.p == -4.0);
  CHECK(Symbol{SymbolRole::Payload, 2.0, -4.0}.photons() == doctest::Approx(5.0));
}

TEST_CASE("sagnac output follows the sum/difference phase law") {
  const Field in{3.0, 0.0};
  const SagnacDrive d{1.1, -0.4};
  const Field expected = std::polar(1.0, (1.1 - 0.4) / 2.0) * std::sin((1.1 + 0.4) / 2.0) * in;
  const Field out = sagnac_output(in, d);
  CHECK(out.real() == doctest::Approx(expected.real()).epsilon(1e-14));
  CHECK(out.imag() == doctest::Approx(expected.imag()).epsilon(1e-14));
  // Equal drives cancel: the dark point.
  CHECK(std::abs(sagnac_output(in, SagnacDrive{0.7, 0.7})) < 1e-15);
}

TEST_CASE("drive_for_target reaches any amplitude below the input") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> q(0.0, 5.0);
  const Field in{30.0, 0.0};
  for (int i = 0; i < 2000; ++i) {
    const double x = q(gen), p = q(gen);
    const SagnacDrive d = drive_for_target(x, p, in);
    const QuadSample got = quadratures_of(sagnac_output(in, d));
    CHECK(got.x == doctest::Approx(x).epsilon(1e-9).scale(1.0));
    CHECK(got.p == doctest::Approx(p).epsilon(1e-9).scale(1.0));
    const SagnacDrive n = d.normalized();
    const QuadSample again = quadratures_of(sagnac_output(in, n));
    CHECK(again.x == doctest::Approx(x).epsilon(1e-9).scale(1.0));
  }
  CHECK_THROWS_AS(drive_for_target(100.0, 0.0, in), EncodingError);
}

TEST_CASE("encoding scale sets V_A from the digital variance") {
  const auto s = EncodingScale::for_variance(25.0, 100.0 * 100.0);
  CHECK(s.k == doctest::Approx(0.05));
  CHECK(s.modulation_variance(10000.0) == doctest::Approx(25.0));
}

TEST_CASE("default pattern is a 63-chip m-sequence plus one zero") {
  int ones = 0;
  for (std::size_t i = 0; i < 63; ++i) ones += pattern_bit(kDefaultPattern, i);
  CHECK(ones == 32);
  CHECK(pattern_bit(kDefaultPattern, 63) == 0);
  // Two-valued cyclic autocorrelation: 63 at zero shift, -1 elsewhere.
  for (std::size_t shift = 1; shift < 63; ++shift) {
    double c = 0.0;
    for (std::size_t i = 0; i < 63; ++i) {
      c += pattern_sign(kDefaultPattern, i) * pattern_sign(kDefaultPattern, (i + shift) % 63);
    }
    CHECK(c == -1.0);
  }
}

TEST_CASE("packet layout") {
  std::vector<rng::GaussianPair> payload(kPayloadSymbols, {1.0, -2.0, 1.0});
  const TxPulseSpec spec;
  const Packet pk = build_packet(payload, 0xA5A5000000000001ULL, spec, EncodingScale{0.5});
  REQUIRE(pk.symbols.size() == kPacketSymbols);
  CHECK(kPacketSymbols == 8385);
  CHECK(pk.symbols[0].role == SymbolRole::Marker);
  CHECK(pk.symbols[0].photons() == doctest::Approx(spec.marker_factor * spec.reference_photons));
  CHECK(pk.header().front().role == SymbolRole::Header);
  CHECK(pk.symbols[kIdOffset].role == SymbolRole::Id);
  CHECK(pk.payload().front().x_a == 0.5);
  CHECK(pk.payload().front().p_a == -1.0);
  CHECK(pk.footer().back().role == SymbolRole::Footer);
  CHECK(pk.header()[5].photons() == doctest::Approx(spec.header_photons));
  // ID bits: bit 0 first, phase pi for a one.
  CHECK(pk.id_field()[0].x_a < 0.0);
  CHECK(pk.id_field()[1].x_a > 0.0);
  for (std::size_t i = 0; i < kPatternSymbols; ++i) CHECK(pk.header()[i].x_a == pk.footer()[i].x_a);
  payload.pop_back();
  CHECK_THROWS_AS(build_packet(payload, 1, spec, EncodingScale{1.0}), FramingError);
}

TEST_CASE("carved pulses reproduce the symbols and leak at the extinction ratio") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> q(0.0, 3.0);
  std::vector<rng::GaussianPair> payload(kPayloadSymbols);
  for (auto& p : payload) p = {q(gen), q(gen), 3.0};
  const TxPulseSpec spec;
  const Packet pk = build_packet(payload, 9, spec, EncodingScale{1.0});
  const auto periods = carve_pulses(pk, 30.0);
  REQUIRE(periods.size() == kPacketSymbols);
  for (std::size_t i = 1; i < periods.size(); i += 97) {
    const QuadSample s = quadratures_of(periods[i][TimeBin::Signal].h);
    CHECK(s.x == doctest::Approx(pk.symbols[i].x_a).epsilon(1e-9).scale(1.0));
    CHECK(s.p == doctest::Approx(pk.symbols[i].p_a).epsilon(1e-9).scale(1.0));
    CHECK(std::norm(periods[i][TimeBin::Reference].v) == doctest::Approx(spec.reference_photons));
    CHECK(periods[i][TimeBin::CloneSignal].residual_v == doctest::Approx(spec.reference_photons * 1e-3));
  }
  CHECK(std::norm(periods[0][TimeBin::Reference].v) == doctest::Approx(4.0 * spec.reference_photons));
  std::ostringstream csv;
  write_packet_csv(csv, pk);
  CHECK(csv.str().rfind("bin_index,role,x_a,p_a,photons\n", 0) == 0);
}
