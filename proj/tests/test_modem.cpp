#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "twrc/errors.hpp"
#include "twrc/modem.hpp"
#include "twrc/rng.hpp"

using namespace twrc;

TEST_CASE("constellation tables") {
  const Constellation& b = bpsk();
  CHECK(b.k == 1);
  CHECK(b.size() == 2);
  CHECK(b.points[0] == cplx(-1.0, 0.0));
  CHECK(b.points[1] == cplx(1.0, 0.0));
  CHECK(b.bits[0][0] == 0);
  CHECK(b.bits[1][0] == 1);
  CHECK(b.symbol_energy() == doctest::Approx(1.0));

  const Constellation& q = qpsk();
  CHECK(q.k == 2);
  CHECK(q.size() == 4);
  CHECK(q.points[0] == cplx(1.0, 1.0));
  CHECK(q.points[1] == cplx(-1.0, 1.0));
  CHECK(q.points[2] == cplx(-1.0, -1.0));
  CHECK(q.points[3] == cplx(1.0, -1.0));
  CHECK(q.symbol_energy() == doctest::Approx(2.0));

  // Gray property: neighbouring points differ in exactly one bit.
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    int diff = (q.bits[i][0] != q.bits[j][0]) + (q.bits[i][1] != q.bits[j][1]);
    CHECK(diff == 1);
  }
  // Bit 1 is the real-part sign, bit 2 the imaginary-part sign.
  for (int i = 0; i < 4; ++i) {
    CHECK(q.bits[i][0] == (q.points[i].real() > 0 ? 1 : 0));
    CHECK(q.bits[i][1] == (q.points[i].imag() > 0 ? 1 : 0));
  }
}

TEST_CASE("lookup by name") {
  CHECK(&constellation_by_name("bpsk") == &bpsk());
  CHECK(&constellation_by_name("qpsk") == &qpsk());
  CHECK_THROWS_AS(constellation_by_name("8psk"), ConfigError);
  CHECK_THROWS_AS(constellation_by_name(""), ConfigError);
}

TEST_CASE("index_of inverts the bit table") {
  for (const Constellation* c : {&bpsk(), &qpsk()})
    for (int i = 0; i < c->size(); ++i) CHECK(c->index_of(c->bits[i].data()) == i);
}

TEST_CASE("modulate maps bit groups in order") {
  BitPacket b{{1, 1, 0, 1, 0, 0, 1, 0}};
  SymbolPacket x = modulate(b, qpsk());
  REQUIRE(x.symbols.size() == 4);
  CHECK(x.symbols[0] == cplx(1.0, 1.0));
  CHECK(x.symbols[1] == cplx(-1.0, 1.0));
  CHECK(x.symbols[2] == cplx(-1.0, -1.0));
  CHECK(x.symbols[3] == cplx(1.0, -1.0));
  CHECK(x.constellation == "qpsk");

  BitPacket odd{{1, 0, 1}};
  CHECK_THROWS_AS(modulate(odd, qpsk()), std::invalid_argument);
  BitPacket empty;
  CHECK_THROWS_AS(modulate(empty, bpsk()), std::invalid_argument);
}

TEST_CASE("ml detection equals nearest neighbour") {
  auto rng = make_stream(42, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const Constellation* c : {&bpsk(), &qpsk()}) {
    for (int trial = 0; trial < 2000; ++trial) {
      cplx y(g(rng), g(rng));
      cplx h(g(rng), g(rng));
      MlDecision d = demodulate_ml(y, h, 0.5, *c);
      int best = 0;
      double bd = std::norm(y - h * c->points[0]);
      for (int i = 1; i < c->size(); ++i) {
        double di = std::norm(y - h * c->points[i]);
        if (di < bd) {
          bd = di;
          best = i;
        }
      }
      CHECK(d.index == best);
      CHECK(d.symbol == c->points[best]);
    }
  }
}

TEST_CASE("ml ties break to the lowest index") {
  // y = 0, h = 1: all QPSK points are equidistant.
  MlDecision d = demodulate_ml(cplx(0.0, 0.0), cplx(1.0, 0.0), 1.0, qpsk());
  CHECK(d.index == 0);
  CHECK(d.symbol == cplx(1.0, 1.0));
  MlDecision db = demodulate_ml(cplx(0.0, 0.0), cplx(1.0, 0.0), 1.0, bpsk());
  CHECK(db.index == 0);
}

TEST_CASE("noiseless round trip") {
  auto rng = make_stream(7, 1);
  for (const Constellation* c : {&bpsk(), &qpsk()}) {
    BitPacket b;
    for (int i = 0; i < 64 * c->k; ++i) b.bits.push_back(static_cast<std::uint8_t>(rng() & 1u));
    SymbolPacket x = modulate(b, *c);
    cplx h(0.3, -1.2);
    SymbolPacket y = x;
    for (auto& s : y.symbols) s *= h;
    BitPacket back = demodulate_packet(y, h, 1e-3, *c);
    CHECK(back.bits == b.bits);
  }
}

TEST_CASE("ebn0 conversion") {
  // BPSK: Es = 1, K = 1 so N0 = 10^(-dB/10).
  CHECK(ebn0_to_n0(0.0, bpsk()) == doctest::Approx(1.0));
  CHECK(ebn0_to_n0(10.0, bpsk()) == doctest::Approx(0.1));
  CHECK(ebn0_to_n0(25.0, bpsk()) == doctest::Approx(std::pow(10.0, -2.5)));
  // QPSK: Es = 2, K = 2 so Eb = 1 and the same numbers hold.
  CHECK(ebn0_to_n0(10.0, qpsk()) == doctest::Approx(0.1));
  CHECK(ebn0_to_n0(-3.0, qpsk()) == doctest::Approx(std::pow(10.0, 0.3)));
}
