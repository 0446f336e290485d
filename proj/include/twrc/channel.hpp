#pragma once
#include <random>

#include "twrc/modem.hpp"

namespace twrc {

enum class FadingModel { RayleighBlock, FixedGain };

struct FadingConfig {
  FadingModel model = FadingModel::RayleighBlock;
  double delta = 0.70710678118654752440;  // Rayleigh scale, E|h|^2 = 2 delta^2 = 1
  // g = log10(E|h_BR| / E|h_AR|); positive favours B's uplink.
  double gain_ratio_log10 = 0.0;
  bool reciprocity = true;
};

// Coefficients are constant over one packet; a fresh state is drawn per packet.
struct ChannelState {
  cplx h_ar, h_br;  // uplink (MAC)
  cplx h_ra, h_rb;  // downlink (BC)
  double n0 = 1.0;
};

// Rayleigh-block: |h| ~ Rayleigh(delta scaled by the mean-gain ratio), phase
// uniform. Fixed-gain: deterministic real coefficients 10^(-g/2), 10^(+g/2).
// ConfigError when delta <= 0.
ChannelState draw_channel(const FadingConfig& cfg, double n0, std::mt19937_64& rng);

// y_r = h_AR x_a + h_BR x_b + w, w circular complex Gaussian with variance
// N0/2 per real dimension. Throws std::invalid_argument on length mismatch.
SymbolPacket mac_phase(const SymbolPacket& x_a, const SymbolPacket& x_b, const ChannelState& ch,
                       std::mt19937_64& rng);

// y = h x + w over a single link.
SymbolPacket bc_phase(const SymbolPacket& x_r, cplx h, double n0, std::mt19937_64& rng);

}  // namespace twrc
