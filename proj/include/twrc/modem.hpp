#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace twrc {

using cplx = std::complex<double>;

// Gray-mapped PSK constellation. points[i] carries bit pattern bits[i]
// (bits[i][0] is bit 1 of the symbol, bits[i][1] bit 2, ...).
struct Constellation {
  std::string name;
  int k = 0;  // bits per symbol
  std::vector<cplx> points;
  std::vector<std::vector<std::uint8_t>> bits;

  int size() const { return static_cast<int>(points.size()); }
  // Index of the point carrying the given K-bit pattern.
  int index_of(const std::uint8_t* pattern) const;
  // E_s = sum |x|^2 / 2^K.
  double symbol_energy() const;
};

const Constellation& bpsk();
const Constellation& qpsk();
// ConfigError on unknown name ("bpsk" | "qpsk").
const Constellation& constellation_by_name(const std::string& name);

struct BitPacket {
  std::vector<std::uint8_t> bits;  // values 0/1
};

struct SymbolPacket {
  std::vector<cplx> symbols;
  std::string constellation;
};

// Bit groups of K map through the Gray table; throws std::invalid_argument
// when the bit count is not divisible by K.
SymbolPacket modulate(const BitPacket& b, const Constellation& c);

struct MlDecision {
  int index;    // constellation point index
  cplx symbol;  // points[index]
};

// Single-user ML detection: argmin |y - h x|^2 over the constellation,
// ties broken toward the lowest point index.
MlDecision demodulate_ml(cplx y, cplx h, double n0, const Constellation& c);

// Whole-packet single-user ML detection to bits.
BitPacket demodulate_packet(const SymbolPacket& y, cplx h, double n0, const Constellation& c);

// N0 from Eb/N0 in dB: N0 = (E_s/K) / 10^(db/10).
double ebn0_to_n0(double ebn0_db, const Constellation& c);

}  // namespace twrc
