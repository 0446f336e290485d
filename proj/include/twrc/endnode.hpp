#pragma once
#include <cstdint>
#include <optional>

#include "twrc/channel.hpp"
#include "twrc/llr.hpp"
#include "twrc/modem.hpp"

namespace twrc {

// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xor-out.
struct CrcConfig {
  std::uint16_t poly = 0x1021;
  std::uint16_t init = 0xFFFF;
};

inline constexpr int kCrcBits = 16;

// Bit-level update, MSB of the word first; bytewise check value of
// "123456789" is 0x29B1.
std::uint16_t crc16_bits(const std::uint8_t* bits, std::size_t n, const CrcConfig& cfg = {});
std::uint16_t crc16_bytes(const std::uint8_t* data, std::size_t n, const CrcConfig& cfg = {});

// Payload + 16 CRC bits appended MSB first. Empty payload is invalid.
BitPacket make_packet(const std::vector<std::uint8_t>& payload_bits, const CrcConfig& cfg = {});
bool crc_ok(const BitPacket& p, const CrcConfig& cfg = {});

struct NodeState {
  std::optional<BitPacket> own_prev;  // packet sent in the previous MAC slot
  CrcConfig crc;
};

enum class BlindOutcome { Direct, Differential, Discard };

struct BlindResult {
  BlindOutcome outcome = BlindOutcome::Discard;
  BitPacket bits;  // recovered partner packet when not Discard
};

// CRC-trial scheme detection: single-user demodulation first (direct
// hypothesis), then XOR with the stored own packet (differential
// hypothesis), else Discard. Throws std::logic_error without own_prev.
BlindResult blind_detect(const SymbolPacket& y, cplx h, double n0, const Constellation& c,
                         const std::optional<BitPacket>& own_prev, const CrcConfig& cfg = {});

// Analog-relay destination: subtract the known self-contribution
// gain*h_down*h_up_self*x_own, then single-user ML against the equivalent
// partner channel gain*h_down*h_up_partner. "me" identifies this node.
BitPacket anc_detect(const SymbolPacket& y, const ChannelState& ch,
                     const SymbolPacket& own_prev_symbols, const Constellation& c, User me,
                     double gain);

}  // namespace twrc
