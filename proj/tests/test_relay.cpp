#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "twrc/channel.hpp"
#include "twrc/errors.hpp"
#include "twrc/llr.hpp"
#include "twrc/modem.hpp"
#include "twrc/relay.hpp"
#include "twrc/rng.hpp"

using namespace twrc;

namespace {

BitPacket random_packet(int nbits, std::mt19937_64& rng) {
  BitPacket b;
  for (int i = 0; i < nbits; ++i) b.bits.push_back(static_cast<std::uint8_t>(rng() & 1u));
  return b;
}

SymbolPacket clean_mac(const SymbolPacket& xa, const SymbolPacket& xb, const ChannelState& ch) {
  SymbolPacket y = xa;
  for (std::size_t i = 0; i < y.symbols.size(); ++i)
    y.symbols[i] = ch.h_ar * xa.symbols[i] + ch.h_br * xb.symbols[i];
  return y;
}

}  // namespace

TEST_CASE("forwarded symbols re-modulate the detected bits") {
  auto rng = make_stream(21, 0);
  const Constellation& c = qpsk();
  ChannelState ch;
  ch.h_ar = cplx(1.0, 0.0);
  ch.h_br = cplx(0.0, 0.35);
  ch.n0 = 0.05;
  for (int t = 0; t < 50; ++t) {
    BitPacket ba = random_packet(16, rng), bb = random_packet(16, rng);
    SymbolPacket y = clean_mac(modulate(ba, c), modulate(bb, c), ch);
    RelayDecision d = hdmf_relay(y, ch, c);
    REQUIRE(d.bits.bits.size() == 16);
    SymbolPacket again = modulate(d.bits, c);
    CHECK(d.x_r.symbols == again.symbols);
    if (d.scheme == Scheme::DirectA) CHECK(d.bits.bits == ba.bits);
    if (d.scheme == Scheme::DirectB) CHECK(d.bits.bits == bb.bits);
    if (d.scheme == Scheme::Differential)
      for (int i = 0; i < 16; ++i) CHECK(d.bits.bits[i] == (ba.bits[i] ^ bb.bits[i]));
  }
}

TEST_CASE("one sided uplink forces the direct scheme") {
  auto rng = make_stream(22, 0);
  const Constellation& c = qpsk();
  ChannelState ch;
  ch.h_ar = cplx(1.0, 0.0);
  ch.h_br = cplx(1e-3, 0.0);
  ch.n0 = 0.1;
  for (int t = 0; t < 20; ++t) {
    BitPacket ba = random_packet(32, rng), bb = random_packet(32, rng);
    SymbolPacket y = mac_phase(modulate(ba, c), modulate(bb, c), ch, rng);
    RelayDecision d = hdmf_relay(y, ch, c);
    CHECK(d.scheme == Scheme::DirectA);
    CHECK(d.bits.bits == ba.bits);
  }
}

TEST_CASE("balanced uplinks favour the xor mapping") {
  auto rng = make_stream(23, 0);
  const Constellation& c = qpsk();
  ChannelState ch;
  ch.h_ar = cplx(1.0, 0.0);
  ch.h_br = cplx(1.0, 0.0);
  ch.n0 = 0.05;
  int diff = 0;
  for (int t = 0; t < 200; ++t) {
    BitPacket ba = random_packet(32, rng), bb = random_packet(32, rng);
    SymbolPacket y = mac_phase(modulate(ba, c), modulate(bb, c), ch, rng);
    diff += hdmf_relay(y, ch, c).scheme == Scheme::Differential ? 1 : 0;
  }
  CHECK(diff >= 198);
}

TEST_CASE("classic relay follows the stronger instantaneous uplink") {
  auto rng = make_stream(24, 0);
  const Constellation& c = bpsk();
  BitPacket ba = random_packet(8, rng), bb = random_packet(8, rng);
  ChannelState ch;
  ch.n0 = 0.01;

  ch.h_ar = cplx(2.0, 0.0);
  ch.h_br = cplx(0.0, 1.0);
  SymbolPacket y = clean_mac(modulate(ba, c), modulate(bb, c), ch);
  RelayDecision d = classic_dmf_relay(y, ch, c);
  CHECK(d.scheme == Scheme::DirectA);
  CHECK(d.bits.bits == ba.bits);

  std::swap(ch.h_ar, ch.h_br);
  y = clean_mac(modulate(ba, c), modulate(bb, c), ch);
  d = classic_dmf_relay(y, ch, c);
  CHECK(d.scheme == Scheme::DirectB);
  CHECK(d.bits.bits == bb.bits);

  ch.h_ar = cplx(0.0, -1.5);  // equal magnitudes tie toward A
  ch.h_br = cplx(1.5, 0.0);
  y = clean_mac(modulate(ba, c), modulate(bb, c), ch);
  CHECK(classic_dmf_relay(y, ch, c).scheme == Scheme::DirectA);
}

TEST_CASE("equal gain xor detection is exact without noise") {
  auto rng = make_stream(25, 0);
  const Constellation& c = bpsk();
  ChannelState ch;
  ch.h_ar = cplx(1.0, 0.0);
  ch.h_br = cplx(1.0, 0.0);
  ch.n0 = 0.2;
  for (int t = 0; t < 100; ++t) {
    BitPacket ba = random_packet(16, rng), bb = random_packet(16, rng);
    SymbolPacket y = clean_mac(modulate(ba, c), modulate(bb, c), ch);
    RelayDecision d = pnc_relay(y, ch, c);
    CHECK(d.scheme == Scheme::Differential);
    for (int i = 0; i < 16; ++i) CHECK(d.bits.bits[i] == (ba.bits[i] ^ bb.bits[i]));
  }
}

TEST_CASE("amplify gain meets the power budget") {
  ChannelState ch;
  ch.h_ar = cplx(0.6, -0.8);
  ch.h_br = cplx(1.5, 0.0);
  ch.n0 = 0.4;
  const Constellation& c = qpsk();
  for (double budget : {0.5, 1.0, 2.0}) {
    double g = anc_gain(ch, c, budget);
    double rx = std::norm(ch.h_ar) * c.symbol_energy() + std::norm(ch.h_br) * c.symbol_energy() +
                ch.n0;
    CHECK(g * g * rx == doctest::Approx(budget));
  }
  CHECK_THROWS_AS(anc_gain(ch, c, 0.0), ConfigError);
  CHECK_THROWS_AS(anc_gain(ch, c, -1.0), ConfigError);
}

TEST_CASE("amplify relay scales the raw samples") {
  auto rng = make_stream(26, 0);
  const Constellation& c = qpsk();
  FadingConfig fc;
  ChannelState ch = draw_channel(fc, 0.3, rng);
  BitPacket ba = random_packet(12, rng), bb = random_packet(12, rng);
  SymbolPacket y = mac_phase(modulate(ba, c), modulate(bb, c), ch, rng);
  RelayDecision d = anc_relay(y, ch, c, 2.0);
  CHECK(d.scheme == Scheme::Analog);
  CHECK(d.bits.bits.empty());
  double g = anc_gain(ch, c, 2.0);
  REQUIRE(d.x_r.symbols.size() == y.symbols.size());
  for (std::size_t i = 0; i < y.symbols.size(); ++i) CHECK(d.x_r.symbols[i] == g * y.symbols[i]);
}

TEST_CASE("decisions are invariant under a common phase rotation") {
  auto rng = make_stream(27, 0);
  const Constellation& c = qpsk();
  FadingConfig fc;
  ChannelState ch = draw_channel(fc, 0.1, rng);
  BitPacket ba = random_packet(24, rng), bb = random_packet(24, rng);
  SymbolPacket y = mac_phase(modulate(ba, c), modulate(bb, c), ch, rng);
  RelayDecision d0 = hdmf_relay(y, ch, c);

  cplx rot = std::polar(1.0, 1.234);
  ChannelState chr = ch;
  chr.h_ar *= rot;
  chr.h_br *= rot;
  SymbolPacket yr = y;
  for (auto& s : yr.symbols) s *= rot;
  RelayDecision d1 = hdmf_relay(yr, chr, c);
  CHECK(d0.scheme == d1.scheme);
  CHECK(d0.bits.bits == d1.bits.bits);

  PacketLlrSummary s0 = packet_llr_summary(y, ch, c);
  PacketLlrSummary s1 = packet_llr_summary(yr, chr, c);
  CHECK(s0.min_dif == doctest::Approx(s1.min_dif));
  CHECK(s0.min_dir_a == doctest::Approx(s1.min_dir_a));
  CHECK(s0.min_dir_b == doctest::Approx(s1.min_dir_b));
}

TEST_CASE("equal gain direct detection error rate") {
  // Noiseless equal-gain BPSK: the colliding midpoint resolves to bit 1, so
  // exactly one of the four bit pairs is misread and the rate is 1/4.
  auto rng = make_stream(28, 0);
  const Constellation& c = bpsk();
  ChannelState ch;
  ch.h_ar = cplx(1.0, 0.0);
  ch.h_br = cplx(1.0, 0.0);
  ch.n0 = 0.3;
  long errors = 0;
  const long n = 20000;
  BitPacket ba, bb;
  ba.bits.resize(1);
  bb.bits.resize(1);
  for (long t = 0; t < n; ++t) {
    ba.bits[0] = static_cast<std::uint8_t>(rng() & 1u);
    bb.bits[0] = static_cast<std::uint8_t>(rng() & 1u);
    SymbolPacket y = clean_mac(modulate(ba, c), modulate(bb, c), ch);
    RelayDecision d = classic_dmf_relay(y, ch, c);
    REQUIRE(d.scheme == Scheme::DirectA);
    errors += d.bits.bits[0] != ba.bits[0] ? 1 : 0;
  }
  CHECK(std::abs(static_cast<double>(errors) / n - 0.25) < 0.012);
}
