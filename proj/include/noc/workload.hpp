#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace noc {

// A sampled spectrum: (wavelength nm, value) pairs, ascending wavelengths.
struct Spectrum {
  std::vector<std::pair<double, double>> samples;
  void validate() const;  // throws std::invalid_argument
};

struct ColorTriple {
  double r = 0, g = 0, b = 0;
  bool operator==(const ColorTriple&) const = default;
};

struct RegionComparison {
  uint64_t similar = 0;
  uint64_t dissimilar = 0;
};

// Projects a spectrum onto three coefficient spectra: each axis is the sum of
// sample * coefficient over the shared wavelength grid, accumulated in
// ascending wavelength order.
ColorTriple color_project(const Spectrum& s, const Spectrum& rc,
                          const Spectrum& gc, const Spectrum& bc);

// Euclidean distance between color triples.
double color_distance(const ColorTriple& a, const ColorTriple& b);

// similar/dissimilar quotient; a perfect match (dissimilar == 0) has no
// defined ratio and raises std::domain_error.
double similitude_ratio(const RegionComparison& rc);

// Per-window arithmetic mean over a grid. Window is one of 2,4,8,16,32 and
// must divide both grid dimensions.
std::vector<std::vector<double>> average_region(
    const std::vector<std::vector<double>>& pixels, unsigned window);

// --- traffic -----------------------------------------------------------------

struct DataKind {
  uint8_t id = 0;
  std::string name;
  unsigned payload_bits = 0;
  unsigned int_length = 0;  // fixed-point integer bits recorded in headers
};

struct DataKindTable {
  std::vector<DataKind> kinds;
  const DataKind& by_id(unsigned id) const;       // throws std::out_of_range
  const DataKind* find(unsigned id) const noexcept;  // nullptr when absent
};

// The four authentication pipeline stages and their wire sizes.
DataKindTable auth_kinds();

struct TraceMessage {
  uint64_t time = 0;
  unsigned source = 0;
  unsigned port = 0;
  uint8_t kind = 0;
  std::vector<bool> payload;
  bool operator==(const TraceMessage&) const = default;
};

struct TrafficTrace {
  std::vector<TraceMessage> messages;
};

// 16-bit unsigned fixed point; int_length integer bits, the rest fraction.
uint16_t encode_fixed(double v, unsigned int_length);
double decode_fixed(uint16_t w, unsigned int_length);

// Packs ceil(bits/16) fixed-point lanes MSB-first and truncates to the exact
// payload size; unpack returns the full lanes that survived.
std::vector<bool> pack_lanes(const std::vector<double>& values,
                             unsigned int_length, unsigned payload_bits);
std::vector<double> unpack_lanes(const std::vector<bool>& payload,
                                 unsigned int_length);

struct AuthTraceSpec {
  unsigned regions = 1;
  unsigned wavelengths = 1;  // messages per region multiply by this
  unsigned window = 2;
  unsigned sources = 4;
  uint64_t start_time = 0;
  uint64_t spacing = 1;
};

// Per region (and wavelength), one message per pipeline stage in order, with
// payload sizes 72/64/64/24 bits, destinations 0..3 and sources round-robined.
TrafficTrace generate_auth_trace(const AuthTraceSpec& spec);

struct SyntheticSpec {
  double rate = 0.1;  // per-source injection probability per cycle
  uint64_t cycles = 1000;
  uint64_t seed = 1;
  unsigned sources = 4;
  unsigned ports = 4;
  DataKindTable kinds = auth_kinds();
};

// Bernoulli-per-cycle load with uniform destinations, kinds and payload bits.
TrafficTrace synthetic_uniform(const SyntheticSpec& spec);

// CSV: header `time,source,port,kind,hex_payload`, one message per line.
void write_trace_csv(std::ostream& os, const TrafficTrace& trace);
TrafficTrace read_trace_csv(std::istream& is, const DataKindTable& kinds);

// CSV: header `lambda,value`.
void write_spectrum_csv(std::ostream& os, const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& is);

}  // namespace noc
