#include "noc/codec.hpp"

#include <cstdio>

namespace noc {

uint8_t encode_header(const Header& h) {
  if (h.id > 7) throw CodecError("header id out of range (max 7)");
  if (h.port > 3) throw CodecError("header port out of range (max 3)");
  if (h.int_length > 7) throw CodecError("header int_length out of range (max 7)");
  uint8_t b = uint8_t(h.id << 5) | uint8_t(h.port << 3) | h.int_length;
  if (b == kTailByte)
    throw CodecError("header encoding collides with the tail byte 0xFF");
  return b;
}

Header decode_header(uint64_t word) {
  if (word > 0xFF) throw CodecError("header flit wider than one byte");
  if (word == kTailByte) throw CodecError("header byte equals the tail byte 0xFF");
  uint8_t b = uint8_t(word);
  return Header{uint8_t(b >> 5), uint8_t((b >> 3) & 3), uint8_t(b & 7)};
}

FlitWidth parse_flit_width(unsigned nbits) {
  switch (nbits) {
    case 8: return FlitWidth::w8;
    case 16: return FlitWidth::w16;
    case 32: return FlitWidth::w32;
    case 64: return FlitWidth::w64;
  }
  throw CodecError("flit width must be 8, 16, 32 or 64 bits, got " +
                   std::to_string(nbits));
}

char flit_letter(FlitKind k) {
  switch (k) {
    case FlitKind::Header: return 'H';
    case FlitKind::Body: return 'B';
    case FlitKind::Tail: return 'T';
    case FlitKind::Whole: return 'P';
  }
  return '?';
}

std::size_t flit_count(std::size_t payload_bits, FlitWidth w) {
  if (payload_bits == 0) throw CodecError("payload must carry at least one bit");
  return 2 + (payload_bits + bits(w) - 1) / bits(w);
}

std::vector<Flit> flitize(const Packet& p, FlitWidth w, uint64_t packet_id) {
  const unsigned wb = bits(w);
  const std::size_t n = p.payload.size();
  std::vector<Flit> out;
  out.reserve(flit_count(n, w));
  out.push_back({FlitKind::Header, encode_header(p.header), packet_id});
  for (std::size_t base = 0; base < n; base += wb) {
    uint64_t word = 0;
    for (unsigned j = 0; j < wb; ++j) {
      word <<= 1;
      if (base + j < n && p.payload[base + j]) word |= 1;
    }
    out.push_back({FlitKind::Body, word, packet_id});
  }
  out.push_back({FlitKind::Tail, kTailByte, packet_id});
  return out;
}

Packet deflitize(std::span<const Flit> flits, FlitWidth w,
                 std::size_t expected_payload_bits) {
  const unsigned wb = bits(w);
  const std::size_t want = flit_count(expected_payload_bits, w);
  if (flits.size() < 3 || flits.front().kind != FlitKind::Header)
    throw CodecError("flit stream does not start with a header");
  if (flits.back().kind != FlitKind::Tail || flits.back().word != kTailByte)
    throw CodecError("flit stream missing its tail");
  if (flits.size() != want)
    throw CodecError("flit stream length " + std::to_string(flits.size()) +
                     " does not match expected " + std::to_string(want));
  const uint64_t pid = flits.front().packet_id;
  for (const Flit& f : flits)
    if (f.packet_id != pid)
      throw CodecError("foreign packet id " + std::to_string(f.packet_id) +
                       " interleaved into packet " + std::to_string(pid));
  Packet p;
  p.header = decode_header(flits.front().word);
  p.payload.reserve(expected_payload_bits);
  for (std::size_t i = 1; i + 1 < flits.size(); ++i) {
    if (flits[i].kind != FlitKind::Body)
      throw CodecError("unexpected flit kind inside the body");
    if (wb < 64 && (flits[i].word >> wb) != 0)
      throw CodecError("body flit wider than the link");
    for (unsigned j = 0; j < wb; ++j) {
      bool bit = (flits[i].word >> (wb - 1 - j)) & 1;
      if (p.payload.size() < expected_payload_bits) {
        p.payload.push_back(bit);
      } else if (bit) {
        throw CodecError("nonzero padding in the last body flit");
      }
    }
  }
  return p;
}

std::string flit_debug(const Flit& f, FlitWidth w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c:0x%0*llx", flit_letter(f.kind), bits(w) / 4,
                static_cast<unsigned long long>(f.word));
  return buf;
}

V1Packet encode_v1(const Header& h, uint16_t data) {
  return V1Packet{uint32_t(encode_header(h)) << 16 | data};
}

std::pair<Header, uint16_t> decode_v1(V1Packet p) {
  if (p.word >> 24) throw CodecError("v1 packet wider than 24 bits");
  return {decode_header(p.word >> 16), uint16_t(p.word & 0xFFFF)};
}

uint64_t bits_to_word(const std::vector<bool>& bits) {
  if (bits.size() > 64) throw CodecError("bit string longer than 64 bits");
  uint64_t w = 0;
  for (bool b : bits) w = (w << 1) | uint64_t(b);
  return w;
}

std::vector<bool> word_to_bits(uint64_t word, std::size_t nbits) {
  if (nbits > 64) throw CodecError("bit string longer than 64 bits");
  std::vector<bool> v(nbits);
  for (std::size_t i = 0; i < nbits; ++i) v[i] = (word >> (nbits - 1 - i)) & 1;
  return v;
}

std::string bits_to_hex(const std::vector<bool>& bits) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve((bits.size() + 3) / 4);
  for (std::size_t base = 0; base < bits.size(); base += 4) {
    unsigned nib = 0;
    for (unsigned j = 0; j < 4; ++j) {
      nib <<= 1;
      if (base + j < bits.size() && bits[base + j]) nib |= 1;
    }
    s.push_back(digits[nib]);
  }
  return s;
}

std::vector<bool> hex_to_bits(const std::string& hex, std::size_t nbits) {
  if (hex.size() != (nbits + 3) / 4)
    throw CodecError("hex payload length does not match the declared bit count");
  std::vector<bool> v;
  v.reserve(nbits);
  for (char c : hex) {
    unsigned nib;
    if (c >= '0' && c <= '9') nib = c - '0';
    else if (c >= 'a' && c <= 'f') nib = 10 + c - 'a';
    else if (c >= 'A' && c <= 'F') nib = 10 + c - 'A';
    else throw CodecError(std::string("bad hex digit '") + c + "'");
    for (unsigned j = 0; j < 4; ++j) v.push_back((nib >> (3 - j)) & 1);
  }
  while (v.size() > nbits) {
    if (v.back()) throw CodecError("nonzero padding in hex payload");
    v.pop_back();
  }
  return v;
}

}  // namespace noc
