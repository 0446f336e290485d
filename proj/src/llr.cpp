#include "twrc/llr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twrc/errors.hpp"

namespace twrc {

namespace {

double clamp_llr(double v) { return std::clamp(v, -kLlrClamp, kLlrClamp); }

double subset_lse(const std::vector<double>& e, const std::vector<std::uint8_t>& mask,
                  std::uint8_t want) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e.size(); ++i)
    if (mask[i] == want) m = std::max(m, e[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (mask[i] == want) sum += std::exp(e[i] - m);
  return m + std::log(sum);
}

// mask[i*S+j] = 1 when the pair (x_i, x_j) belongs to the "bit = 1" set.
enum class MaskKind { DirectSelfFirst, DirectSelfSecond, Diff };

std::vector<std::uint8_t> bit_mask(const Constellation& c, int k, MaskKind kind) {
  int s = c.size();
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(s) * s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      std::uint8_t v = 0;
      switch (kind) {
        case MaskKind::DirectSelfFirst: v = c.bits[i][k]; break;
        case MaskKind::DirectSelfSecond: v = c.bits[j][k]; break;
        case MaskKind::Diff: v = c.bits[i][k] ^ c.bits[j][k]; break;
      }
      mask[static_cast<std::size_t>(i) * s + j] = v;
    }
  return mask;
}

}  // namespace

PairExponents compute_pair_exponents(cplx y, cplx h_a, cplx h_b, double n0,
                                     const Constellation& c) {
  if (n0 <= 0.0) throw ConfigError("N0 must be positive for LLR evaluation");
  PairExponents pe;
  pe.s = c.size();
  pe.e.resize(static_cast<std::size_t>(pe.s) * pe.s);
  for (int i = 0; i < pe.s; ++i) {
    cplx ai = y - h_a * c.points[i];
    for (int j = 0; j < pe.s; ++j)
      pe.e[static_cast<std::size_t>(i) * pe.s + j] = -std::norm(ai - h_b * c.points[j]) / n0;
  }
  return pe;
}

double mixture_llr(const PairExponents& pe, const std::vector<std::uint8_t>& mask) {
  return clamp_llr(subset_lse(pe.e, mask, 1) - subset_lse(pe.e, mask, 0));
}

BitLlr llr_direct_bit(cplx y, cplx h_self, cplx h_other, double n0, const Constellation& c,
                      int k) {
  PairExponents pe = compute_pair_exponents(y, h_self, h_other, n0, c);
  return {mixture_llr(pe, bit_mask(c, k, MaskKind::DirectSelfFirst)), k, 0};
}

BitLlr llr_diff_bit(cplx y, cplx h_ar, cplx h_br, double n0, const Constellation& c, int k) {
  PairExponents pe = compute_pair_exponents(y, h_ar, h_br, n0, c);
  return {mixture_llr(pe, bit_mask(c, k, MaskKind::Diff)), k, 0};
}

PacketLlrSummary packet_llr_summary(const SymbolPacket& y_r, const ChannelState& ch,
                                    const Constellation& c) {
  const int m_count = static_cast<int>(y_r.symbols.size());
  std::vector<std::vector<std::uint8_t>> mask_a, mask_b, mask_d;
  for (int k = 0; k < c.k; ++k) {
    mask_a.push_back(bit_mask(c, k, MaskKind::DirectSelfFirst));
    mask_b.push_back(bit_mask(c, k, MaskKind::DirectSelfSecond));
    mask_d.push_back(bit_mask(c, k, MaskKind::Diff));
  }
  PacketLlrSummary s;
  s.dir_a.resize(m_count);
  s.dir_b.resize(m_count);
  s.dif.resize(m_count);
  for (int m = 0; m < m_count; ++m) {
    PairExponents pe = compute_pair_exponents(y_r.symbols[m], ch.h_ar, ch.h_br, ch.n0, c);
    double a = 0.0, b = 0.0, d = 0.0;
    for (int k = 0; k < c.k; ++k) {
      a += std::abs(mixture_llr(pe, mask_a[k]));
      b += std::abs(mixture_llr(pe, mask_b[k]));
      d += std::abs(mixture_llr(pe, mask_d[k]));
    }
    s.dir_a[m] = a;
    s.dir_b[m] = b;
    s.dif[m] = d;
  }
  s.min_dir_a = *std::min_element(s.dir_a.begin(), s.dir_a.end());
  s.min_dir_b = *std::min_element(s.dir_b.begin(), s.dir_b.end());
  s.min_dif = *std::min_element(s.dif.begin(), s.dif.end());
  return s;
}

Scheme decide_scheme(const PacketLlrSummary& s) {
  // The per-symbol direct confidence is max over the two users, so its packet
  // minimum is min_m max(dir_a[m], dir_b[m]), not max of the two minima.
  double min_dir = kLlrClamp * 2.0;
  for (std::size_t m = 0; m < s.dir_a.size(); ++m)
    min_dir = std::min(min_dir, std::max(s.dir_a[m], s.dir_b[m]));
  if (min_dir > s.min_dif)
    return s.min_dir_a >= s.min_dir_b ? Scheme::DirectA : Scheme::DirectB;
  return Scheme::Differential;
}

namespace {

BitPacket detect_bits(const SymbolPacket& y_r, const ChannelState& ch, const Constellation& c,
                      MaskKind kind) {
  std::vector<std::vector<std::uint8_t>> masks;
  for (int k = 0; k < c.k; ++k) masks.push_back(bit_mask(c, k, kind));
  BitPacket out;
  out.bits.reserve(y_r.symbols.size() * c.k);
  for (cplx y : y_r.symbols) {
    PairExponents pe = compute_pair_exponents(y, ch.h_ar, ch.h_br, ch.n0, c);
    for (int k = 0; k < c.k; ++k)
      out.bits.push_back(mixture_llr(pe, masks[k]) >= 0.0 ? 1 : 0);
  }
  return out;
}

}  // namespace

BitPacket detect_bits_direct(const SymbolPacket& y_r, const ChannelState& ch,
                             const Constellation& c, User user) {
  return detect_bits(y_r, ch, c,
                     user == User::A ? MaskKind::DirectSelfFirst : MaskKind::DirectSelfSecond);
}

BitPacket detect_bits_diff(const SymbolPacket& y_r, const ChannelState& ch,
                           const Constellation& c) {
  return detect_bits(y_r, ch, c, MaskKind::Diff);
}

}  // namespace twrc
