#pragma once
#include "twrc/llr.hpp"

namespace twrc {

struct RelayDecision {
  Scheme scheme = Scheme::Differential;
  BitPacket bits;     // detected bits (empty for Analog)
  SymbolPacket x_r;   // forwarded packet; constellation points for digital
                      // schemes, scaled raw samples for Analog
};

// Packet-level LLR switch (decide_scheme), bitwise detection of the chosen
// hypothesis, re-modulation. The scheme is recorded for statistics only;
// nothing on air identifies it.
RelayDecision hdmf_relay(const SymbolPacket& y_r, const ChannelState& ch, const Constellation& c);

// Always direct on the stronger instantaneous uplink (|h_AR| vs |h_BR|,
// tie to A).
RelayDecision classic_dmf_relay(const SymbolPacket& y_r, const ChannelState& ch,
                                const Constellation& c);

// Always the XOR mapping.
RelayDecision pnc_relay(const SymbolPacket& y_r, const ChannelState& ch, const Constellation& c);

// Amplify-forward gain normalizing average transmit power against the
// analytic received power |h_AR|^2 Es + |h_BR|^2 Es + N0.
double anc_gain(const ChannelState& ch, const Constellation& c, double power_budget);
RelayDecision anc_relay(const SymbolPacket& y_r, const ChannelState& ch, const Constellation& c,
                        double power_budget);

}  // namespace twrc
