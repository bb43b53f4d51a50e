#pragma once
// packet formats for the data network: header byte layout, flitization for the
// wormhole fabric, and the single-word packets used by the v1 network.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace noc {

struct CodecError : std::runtime_error {
  explicit CodecError(const std::string& what) : std::runtime_error(what) {}
};

// header byte: id[7:5] | port[4:3] | int_length[2:0]
struct Header {
  uint8_t id = 0;          // data identity, 0..7
  uint8_t port = 0;        // destination processing module, 0..3
  uint8_t int_length = 0;  // integer-part width of the fixed point lanes, 0..7
  bool operator==(const Header&) const = default;
};

inline constexpr uint8_t kTailByte = 0xFF;

// rejects out-of-range fields and the one encoding that collides with the tail byte
uint8_t encode_header(const Header& h);
// accepts the low 8 bits; rejects 0xFF and words wider than a byte
Header decode_header(uint64_t word);

enum class FlitWidth : unsigned { w8 = 8, w16 = 16, w32 = 32, w64 = 64 };
inline unsigned bits(FlitWidth w) { return static_cast<unsigned>(w); }
FlitWidth parse_flit_width(unsigned nbits);

// Whole marks an unfragmented unit (a v1 packet or a p2p word); it never
// appears in a flitized stream.
enum class FlitKind : uint8_t { Header, Body, Tail, Whole };
char flit_letter(FlitKind k);

struct Flit {
  FlitKind kind = FlitKind::Body;
  uint64_t word = 0;       // zero-extended to 64 bits regardless of flit width
  uint64_t packet_id = 0;  // simulator-side wormhole tracking, not wire state
};

// payload bit strings are msb-first: payload[0] travels in the highest bit of
// the first body flit; the last body flit is zero-padded in its low bits.
struct Packet {
  Header header;
  std::vector<bool> payload;  // length >= 1
};

// header + ceil(payload/width) bodies + tail
std::size_t flit_count(std::size_t payload_bits, FlitWidth w);

std::vector<Flit> flitize(const Packet& p, FlitWidth w, uint64_t packet_id);

// width is the receiver's configured link width; the expected payload length
// comes from the data-kind table keyed by the header id
Packet deflitize(std::span<const Flit> flits, FlitWidth w,
                 std::size_t expected_payload_bits);

// "<kind>:<hex word>", used by the cli trace subcommand, one flit per line
std::string flit_debug(const Flit& f, FlitWidth w);

// v1 sends one 24-bit packet per transfer: header byte then 16 data bits, no tail
struct V1Packet {
  uint32_t word = 0;
  bool operator==(const V1Packet&) const = default;
};

V1Packet encode_v1(const Header& h, uint16_t data);
std::pair<Header, uint16_t> decode_v1(V1Packet p);

// msb-first bit string helpers shared by the traffic generators and the v1 packer
uint64_t bits_to_word(const std::vector<bool>& bits);  // size <= 64
std::vector<bool> word_to_bits(uint64_t word, std::size_t nbits);
std::string bits_to_hex(const std::vector<bool>& bits);
std::vector<bool> hex_to_bits(const std::string& hex, std::size_t nbits);

}  // namespace noc
