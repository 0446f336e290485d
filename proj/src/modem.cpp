#include "twrc/modem.hpp"

#include <cmath>
#include <stdexcept>

#include "twrc/errors.hpp"

namespace twrc {

int Constellation::index_of(const std::uint8_t* pattern) const {
  for (int i = 0; i < size(); ++i) {
    bool hit = true;
    for (int j = 0; j < k; ++j) {
      if (bits[i][j] != pattern[j]) {
        hit = false;
        break;
      }
    }
    if (hit) return i;
  }
  throw std::invalid_argument("bit pattern not in constellation map");
}

double Constellation::symbol_energy() const {
  double e = 0.0;
  for (const auto& p : points) e += std::norm(p);
  return e / static_cast<double>(points.size());
}

const Constellation& bpsk() {
  static const Constellation c{
      "bpsk", 1, {cplx(-1.0, 0.0), cplx(1.0, 0.0)}, {{0}, {1}}};
  return c;
}

const Constellation& qpsk() {
  // Bit 1 follows the real sign, bit 2 the imaginary sign; neighbours along
  // the circle differ in exactly one bit.
  static const Constellation c{"qpsk",
                               2,
                               {cplx(1.0, 1.0), cplx(-1.0, 1.0), cplx(-1.0, -1.0), cplx(1.0, -1.0)},
                               {{1, 1}, {0, 1}, {0, 0}, {1, 0}}};
  return c;
}

const Constellation& constellation_by_name(const std::string& name) {
  if (name == "bpsk") return bpsk();
  if (name == "qpsk") return qpsk();
  throw ConfigError("unknown modulation: " + name);
}

SymbolPacket modulate(const BitPacket& b, const Constellation& c) {
  if (b.bits.empty() || b.bits.size() % static_cast<std::size_t>(c.k) != 0)
    throw std::invalid_argument("bit count not divisible by bits/symbol");
  SymbolPacket out;
  out.constellation = c.name;
  out.symbols.reserve(b.bits.size() / c.k);
  for (std::size_t m = 0; m < b.bits.size(); m += c.k)
    out.symbols.push_back(c.points[c.index_of(&b.bits[m])]);
  return out;
}

MlDecision demodulate_ml(cplx y, cplx h, double /*n0*/, const Constellation& c) {
  int best = 0;
  double best_d = std::norm(y - h * c.points[0]);
  for (int i = 1; i < c.size(); ++i) {
    double d = std::norm(y - h * c.points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return {best, c.points[best]};
}

BitPacket demodulate_packet(const SymbolPacket& y, cplx h, double n0, const Constellation& c) {
  BitPacket out;
  out.bits.reserve(y.symbols.size() * c.k);
  for (cplx s : y.symbols) {
    int idx = demodulate_ml(s, h, n0, c).index;
    for (int j = 0; j < c.k; ++j) out.bits.push_back(c.bits[idx][j]);
  }
  return out;
}

double ebn0_to_n0(double ebn0_db, const Constellation& c) {
  double eb = c.symbol_energy() / c.k;
  return eb / std::pow(10.0, ebn0_db / 10.0);
}

}  // namespace twrc
