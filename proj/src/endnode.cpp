#include "twrc/endnode.hpp"

#include <stdexcept>

#include "twrc/errors.hpp"

namespace twrc {

std::uint16_t crc16_bits(const std::uint8_t* bits, std::size_t n, const CrcConfig& cfg) {
  std::uint16_t crc = cfg.init;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint16_t top = static_cast<std::uint16_t>((crc >> 15) & 1u);
    crc = static_cast<std::uint16_t>(crc << 1);
    if (top ^ (bits[i] & 1u)) crc ^= cfg.poly;
  }
  return crc;
}

std::uint16_t crc16_bytes(const std::uint8_t* data, std::size_t n, const CrcConfig& cfg) {
  std::vector<std::uint8_t> bits;
  bits.reserve(n * 8);
  for (std::size_t i = 0; i < n; ++i)
    for (int b = 7; b >= 0; --b) bits.push_back((data[i] >> b) & 1u);
  return crc16_bits(bits.data(), bits.size(), cfg);
}

BitPacket make_packet(const std::vector<std::uint8_t>& payload_bits, const CrcConfig& cfg) {
  if (payload_bits.empty()) throw std::invalid_argument("empty payload");
  BitPacket p;
  p.bits = payload_bits;
  std::uint16_t crc = crc16_bits(payload_bits.data(), payload_bits.size(), cfg);
  for (int b = kCrcBits - 1; b >= 0; --b) p.bits.push_back((crc >> b) & 1u);
  return p;
}

bool crc_ok(const BitPacket& p, const CrcConfig& cfg) {
  if (p.bits.size() <= kCrcBits) return false;
  std::size_t n = p.bits.size() - kCrcBits;
  std::uint16_t crc = crc16_bits(p.bits.data(), n, cfg);
  for (int b = 0; b < kCrcBits; ++b)
    if (p.bits[n + b] != ((crc >> (kCrcBits - 1 - b)) & 1u)) return false;
  return true;
}

BlindResult blind_detect(const SymbolPacket& y, cplx h, double n0, const Constellation& c,
                         const std::optional<BitPacket>& own_prev, const CrcConfig& cfg) {
  if (!own_prev.has_value())
    throw std::logic_error("blind detection needs the previously transmitted packet");
  BitPacket step1 = demodulate_packet(y, h, n0, c);
  if (step1.bits.size() != own_prev->bits.size())
    throw std::invalid_argument("received packet length differs from stored packet");
  if (crc_ok(step1, cfg)) return {BlindOutcome::Direct, std::move(step1)};
  BitPacket step2;
  step2.bits.resize(step1.bits.size());
  for (std::size_t i = 0; i < step1.bits.size(); ++i)
    step2.bits[i] = step1.bits[i] ^ own_prev->bits[i];
  if (crc_ok(step2, cfg)) return {BlindOutcome::Differential, std::move(step2)};
  return {BlindOutcome::Discard, {}};
}

BitPacket anc_detect(const SymbolPacket& y, const ChannelState& ch,
                     const SymbolPacket& own_prev_symbols, const Constellation& c, User me,
                     double gain) {
  if (gain <= 0.0) throw ConfigError("ANC gain must be positive");
  if (y.symbols.size() != own_prev_symbols.symbols.size())
    throw std::invalid_argument("stored symbol packet length mismatch");
  cplx h_down = (me == User::A) ? ch.h_ra : ch.h_rb;
  cplx h_self = (me == User::A) ? ch.h_ar : ch.h_br;
  cplx h_partner = (me == User::A) ? ch.h_br : ch.h_ar;
  cplx self_coef = gain * h_down * h_self;
  cplx h_eff = gain * h_down * h_partner;
  BitPacket out;
  out.bits.reserve(y.symbols.size() * c.k);
  for (std::size_t m = 0; m < y.symbols.size(); ++m) {
    cplx cleaned = y.symbols[m] - self_coef * own_prev_symbols.symbols[m];
    int idx = demodulate_ml(cleaned, h_eff, ch.n0, c).index;
    for (int j = 0; j < c.k; ++j) out.bits.push_back(c.bits[idx][j]);
  }
  return out;
}

}  // namespace twrc
