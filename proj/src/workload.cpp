#include "noc/workload.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "noc/codec.hpp"

namespace noc {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool window_ok(unsigned w) {
  return w == 2 || w == 4 || w == 8 || w == 16 || w == 32;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void Spectrum::validate() const {
  for (size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].second >= 0))
      throw std::invalid_argument("spectral value at " +
                                  fmt_double(samples[i].first) +
                                  "nm is negative");
    if (i && !(samples[i - 1].first < samples[i].first))
      throw std::invalid_argument("wavelengths must be strictly ascending near " +
                                  fmt_double(samples[i].first) + "nm");
  }
}

ColorTriple color_project(const Spectrum& s, const Spectrum& rc,
                          const Spectrum& gc, const Spectrum& bc) {
  s.validate();
  for (const Spectrum* c : {&rc, &gc, &bc}) {
    if (c->samples.size() != s.samples.size())
      throw std::invalid_argument("coefficient spectrum sample count differs");
    for (size_t i = 0; i < s.samples.size(); ++i)
      if (c->samples[i].first != s.samples[i].first)
        throw std::invalid_argument("coefficient wavelength grid differs at " +
                                    fmt_double(s.samples[i].first) + "nm");
  }
  ColorTriple t;
  for (size_t i = 0; i < s.samples.size(); ++i) {
    double v = s.samples[i].second;
    t.r += v * rc.samples[i].second;
    t.g += v * gc.samples[i].second;
    t.b += v * bc.samples[i].second;
  }
  return t;
}

double color_distance(const ColorTriple& a, const ColorTriple& b) {
  double dr = a.r - b.r, dg = a.g - b.g, db = a.b - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

double similitude_ratio(const RegionComparison& rc) {
  if (rc.dissimilar == 0)
    throw std::domain_error(
        "similitude ratio is undefined when no region is dissimilar");
  return double(rc.similar) / double(rc.dissimilar);
}

std::vector<std::vector<double>> average_region(
    const std::vector<std::vector<double>>& pixels, unsigned window) {
  if (pixels.empty() || pixels[0].empty())
    throw std::invalid_argument("empty pixel grid");
  if (!window_ok(window))
    throw std::invalid_argument("window must be one of 2, 4, 8, 16, 32");
  const size_t rows = pixels.size(), cols = pixels[0].size();
  for (const auto& row : pixels)
    if (row.size() != cols) throw std::invalid_argument("ragged pixel grid");
  if (rows % window || cols % window)
    throw std::invalid_argument("grid " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " is not divisible by " +
                                std::to_string(window));
  std::vector<std::vector<double>> out(rows / window,
                                       std::vector<double>(cols / window));
  for (size_t br = 0; br < rows / window; ++br)
    for (size_t bc = 0; bc < cols / window; ++bc) {
      double sum = 0;
      for (unsigned i = 0; i < window; ++i)
        for (unsigned j = 0; j < window; ++j)
          sum += pixels[br * window + i][bc * window + j];
      out[br][bc] = sum / (double(window) * window);
    }
  return out;
}

// --- traffic -----------------------------------------------------------------

const DataKind& DataKindTable::by_id(unsigned id) const {
  if (const DataKind* k = find(id)) return *k;
  throw std::out_of_range("unknown data kind id " + std::to_string(id));
}

const DataKind* DataKindTable::find(unsigned id) const noexcept {
  for (const DataKind& k : kinds)
    if (k.id == id) return &k;
  return nullptr;
}

DataKindTable auth_kinds() {
  return {{{0, "project", 72, 4},
           {1, "distance", 64, 4},
           {2, "similitude", 64, 4},
           {3, "average", 24, 4}}};
}

uint16_t encode_fixed(double v, unsigned int_length) {
  if (int_length > 15) throw std::invalid_argument("int_length exceeds the lane");
  double scaled = v * double(1u << (16 - int_length));
  long long w = std::llround(scaled);
  if (w < 0 || w > 0xFFFF)
    throw std::out_of_range(fmt_double(v) + " does not fit " +
                            std::to_string(int_length) + "." +
                            std::to_string(16 - int_length) + " fixed point");
  return uint16_t(w);
}

double decode_fixed(uint16_t w, unsigned int_length) {
  return double(w) / double(1u << (16 - int_length));
}

std::vector<bool> pack_lanes(const std::vector<double>& values,
                             unsigned int_length, unsigned payload_bits) {
  const size_t need = (payload_bits + 15) / 16;
  if (values.size() != need)
    throw std::invalid_argument("payload of " + std::to_string(payload_bits) +
                                " bits takes " + std::to_string(need) +
                                " lanes, got " + std::to_string(values.size()));
  std::vector<bool> bits;
  bits.reserve(need * 16);
  for (double v : values) {
    uint16_t w = encode_fixed(v, int_length);
    for (int b = 15; b >= 0; --b) bits.push_back((w >> b) & 1);
  }
  bits.resize(payload_bits);
  return bits;
}

std::vector<double> unpack_lanes(const std::vector<bool>& payload,
                                 unsigned int_length) {
  std::vector<double> out;
  for (size_t i = 0; i + 16 <= payload.size(); i += 16) {
    uint16_t w = 0;
    for (size_t b = 0; b < 16; ++b) w = uint16_t(w << 1 | payload[i + b]);
    out.push_back(decode_fixed(w, int_length));
  }
  return out;
}

TrafficTrace generate_auth_trace(const AuthTraceSpec& spec) {
  if (!spec.regions || !spec.wavelengths || !spec.sources)
    throw std::invalid_argument("auth trace counts must be at least 1");
  if (!window_ok(spec.window))
    throw std::invalid_argument("window must be one of 2, 4, 8, 16, 32");
  DataKindTable kinds = auth_kinds();
  TrafficTrace t;
  uint64_t m = 0;
  for (unsigned r = 0; r < spec.regions; ++r)
    for (unsigned w = 0; w < spec.wavelengths; ++w)
      for (unsigned stage = 0; stage < 4; ++stage, ++m) {
        const DataKind& k = kinds.by_id(stage);
        std::vector<double> lanes((k.payload_bits + 15) / 16);
        for (size_t j = 0; j < lanes.size(); ++j)
          lanes[j] =
              double((r * 37u + w * 11u + stage * 7u + unsigned(j) * 3u +
                      spec.window) %
                     256u) *
              0.0625;
        t.messages.push_back({spec.start_time + m * spec.spacing,
                              unsigned(m % spec.sources), stage,
                              uint8_t(stage),
                              pack_lanes(lanes, k.int_length, k.payload_bits)});
      }
  return t;
}

TrafficTrace synthetic_uniform(const SyntheticSpec& spec) {
  if (!(spec.rate > 0.0) || spec.rate > 1.0)
    throw std::invalid_argument("injection rate must be in (0, 1]");
  if (!spec.cycles || !spec.sources || !spec.ports || spec.kinds.kinds.empty())
    throw std::invalid_argument("synthetic load needs cycles, sources, ports "
                                "and at least one data kind");
  std::mt19937_64 rng(spec.seed);
  auto canonical = [&] { return double(rng() >> 11) * 0x1.0p-53; };
  TrafficTrace t;
  for (uint64_t cycle = 0; cycle < spec.cycles; ++cycle)
    for (unsigned s = 0; s < spec.sources; ++s) {
      if (canonical() >= spec.rate) continue;
      unsigned port = unsigned(rng() % spec.ports);
      const DataKind& k =
          spec.kinds.kinds[size_t(rng() % spec.kinds.kinds.size())];
      std::vector<bool> payload(k.payload_bits);
      for (size_t b = 0; b < payload.size(); ++b) payload[b] = rng() & 1;
      t.messages.push_back({cycle, s, port, k.id, std::move(payload)});
    }
  return t;
}

void write_trace_csv(std::ostream& os, const TrafficTrace& trace) {
  os << "time,source,port,kind,hex_payload\n";
  for (const TraceMessage& m : trace.messages)
    os << m.time << ',' << m.source << ',' << m.port << ',' << unsigned(m.kind)
       << ',' << bits_to_hex(m.payload) << '\n';
}

TrafficTrace read_trace_csv(std::istream& is, const DataKindTable& kinds) {
  std::string line;
  size_t lineno = 1;
  if (!std::getline(is, line) ||
      split_csv(line) !=
          std::vector<std::string>{"time", "source", "port", "kind",
                                   "hex_payload"})
    throw std::runtime_error("trace csv line 1: bad or missing header");
  TrafficTrace t;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv(line);
    try {
      if (f.size() != 5) throw std::runtime_error("expected 5 columns");
      TraceMessage m;
      m.time = std::stoull(f[0]);
      m.source = unsigned(std::stoul(f[1]));
      m.port = unsigned(std::stoul(f[2]));
      unsigned kind = unsigned(std::stoul(f[3]));
      const DataKind& k = kinds.by_id(kind);
      m.kind = uint8_t(kind);
      m.payload = hex_to_bits(f[4], k.payload_bits);
      t.messages.push_back(std::move(m));
    } catch (const std::exception& e) {
      throw std::runtime_error("trace csv line " + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  return t;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "lambda,value\n";
  for (const auto& [lambda, value] : s.samples)
    os << fmt_double(lambda) << ',' << fmt_double(value) << '\n';
}

Spectrum read_spectrum_csv(std::istream& is) {
  std::string line;
  size_t lineno = 1;
  if (!std::getline(is, line) ||
      split_csv(line) != std::vector<std::string>{"lambda", "value"})
    throw std::runtime_error("spectrum csv line 1: bad or missing header");
  Spectrum s;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv(line);
    try {
      if (f.size() != 2) throw std::runtime_error("expected 2 columns");
      s.samples.emplace_back(std::stod(f[0]), std::stod(f[1]));
    } catch (const std::exception& e) {
      throw std::runtime_error("spectrum csv line " + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  s.validate();
  return s;
}

}  // namespace noc
