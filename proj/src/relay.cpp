#include "twrc/relay.hpp"

#include <cmath>

#include "twrc/errors.hpp"

namespace twrc {

namespace {

RelayDecision forward_bits(Scheme scheme, BitPacket bits, const Constellation& c) {
  RelayDecision d;
  d.scheme = scheme;
  d.x_r = modulate(bits, c);
  d.bits = std::move(bits);
  return d;
}

}  // namespace

RelayDecision hdmf_relay(const SymbolPacket& y_r, const ChannelState& ch, const Constellation& c) {
  PacketLlrSummary s = packet_llr_summary(y_r, ch, c);
  Scheme scheme = decide_scheme(s);
  switch (scheme) {
    case Scheme::DirectA:
      return forward_bits(scheme, detect_bits_direct(y_r, ch, c, User::A), c);
    case Scheme::DirectB:
      return forward_bits(scheme, detect_bits_direct(y_r, ch, c, User::B), c);
    default:
      return forward_bits(Scheme::Differential, detect_bits_diff(y_r, ch, c), c);
  }
}

RelayDecision classic_dmf_relay(const SymbolPacket& y_r, const ChannelState& ch,
                                const Constellation& c) {
  bool a_stronger = std::abs(ch.h_ar) >= std::abs(ch.h_br);
  Scheme scheme = a_stronger ? Scheme::DirectA : Scheme::DirectB;
  return forward_bits(scheme,
                      detect_bits_direct(y_r, ch, c, a_stronger ? User::A : User::B), c);
}

RelayDecision pnc_relay(const SymbolPacket& y_r, const ChannelState& ch, const Constellation& c) {
  return forward_bits(Scheme::Differential, detect_bits_diff(y_r, ch, c), c);
}

double anc_gain(const ChannelState& ch, const Constellation& c, double power_budget) {
  if (power_budget <= 0.0) throw ConfigError("ANC power budget must be positive");
  double es = c.symbol_energy();
  double rx_power = std::norm(ch.h_ar) * es + std::norm(ch.h_br) * es + ch.n0;
  if (rx_power <= 0.0) throw ConfigError("ANC relay sees zero input power");
  return std::sqrt(power_budget / rx_power);
}

RelayDecision anc_relay(const SymbolPacket& y_r, const ChannelState& ch, const Constellation& c,
                        double power_budget) {
  double g = anc_gain(ch, c, power_budget);
  RelayDecision d;
  d.scheme = Scheme::Analog;
  d.x_r.constellation = y_r.constellation;
  d.x_r.symbols.reserve(y_r.symbols.size());
  for (cplx s : y_r.symbols) d.x_r.symbols.push_back(g * s);
  return d;
}

}  // namespace twrc
