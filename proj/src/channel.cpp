#include "twrc/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "twrc/errors.hpp"

namespace twrc {

namespace {

cplx draw_cn(double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  double re = n01(rng);
  double im = n01(rng);
  return cplx(scale * re, scale * im);
}

cplx noise_sample(double n0, std::mt19937_64& rng) {
  if (n0 <= 0.0) return cplx(0.0, 0.0);
  return draw_cn(std::sqrt(n0 / 2.0), rng);
}

}  // namespace

ChannelState draw_channel(const FadingConfig& cfg, double n0, std::mt19937_64& rng) {
  if (cfg.delta <= 0.0) throw ConfigError("fading delta must be positive");
  double half = cfg.gain_ratio_log10 / 2.0;
  double scale_a = std::pow(10.0, -half);
  double scale_b = std::pow(10.0, +half);
  ChannelState ch;
  ch.n0 = n0;
  if (cfg.model == FadingModel::FixedGain) {
    ch.h_ar = cplx(scale_a, 0.0);
    ch.h_br = cplx(scale_b, 0.0);
    ch.h_ra = ch.h_ar;
    ch.h_rb = ch.h_br;
    return ch;
  }
  ch.h_ar = draw_cn(cfg.delta * scale_a, rng);
  ch.h_br = draw_cn(cfg.delta * scale_b, rng);
  if (cfg.reciprocity) {
    ch.h_ra = ch.h_ar;
    ch.h_rb = ch.h_br;
  } else {
    ch.h_ra = draw_cn(cfg.delta * scale_a, rng);
    ch.h_rb = draw_cn(cfg.delta * scale_b, rng);
  }
  return ch;
}

SymbolPacket mac_phase(const SymbolPacket& x_a, const SymbolPacket& x_b, const ChannelState& ch,
                       std::mt19937_64& rng) {
  if (x_a.symbols.size() != x_b.symbols.size())
    throw std::invalid_argument("MAC packets differ in length");
  SymbolPacket y;
  y.constellation = x_a.constellation;
  y.symbols.reserve(x_a.symbols.size());
  for (std::size_t m = 0; m < x_a.symbols.size(); ++m)
    y.symbols.push_back(ch.h_ar * x_a.symbols[m] + ch.h_br * x_b.symbols[m] +
                        noise_sample(ch.n0, rng));
  return y;
}

SymbolPacket bc_phase(const SymbolPacket& x_r, cplx h, double n0, std::mt19937_64& rng) {
  SymbolPacket y;
  y.constellation = x_r.constellation;
  y.symbols.reserve(x_r.symbols.size());
  for (cplx s : x_r.symbols) y.symbols.push_back(h * s + noise_sample(n0, rng));
  return y;
}

}  // namespace twrc
