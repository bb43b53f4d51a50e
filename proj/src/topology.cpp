#include "noc/topology.hpp"

#include <sstream>
#include <stdexcept>

namespace noc {

const char* name(Version v) {
  switch (v) {
    case Version::V1: return "V1";
    case Version::V2: return "V2";
    case Version::P2P: return "P2P";
  }
  return "?";
}

Version parse_version(const std::string& s) {
  if (s == "v1" || s == "V1") return Version::V1;
  if (s == "v2" || s == "V2") return Version::V2;
  if (s == "p2p" || s == "P2P") return Version::P2P;
  throw std::invalid_argument("unknown network version '" + s +
                              "' (expected v1, v2 or p2p)");
}

unsigned NetworkSpec::switches() const {
  if (n_switches) return n_switches;
  switch (version) {
    case Version::V1: return 1;
    case Version::V2: return 2;
    case Version::P2P: return 0;
  }
  return 0;
}

void NetworkSpec::validate() const {
  if (n_sources == 0) throw std::invalid_argument("need at least one source module");
  if (n_outputs == 0 || n_outputs > 4)
    throw std::invalid_argument("outputs must be 1..4: the header port field is 2 bits");
  if (vc_depth == 0) throw std::invalid_argument("vc_depth must be positive");
  if (fifo_na_depth == 0)
    throw std::invalid_argument("fifo_na_depth must be positive");
  switch (version) {
    case Version::V1:
      if (n_switches > 1)
        throw std::invalid_argument("version 1 has exactly one main switch");
      if (v1_packet_bits < 9 || v1_packet_bits > 64)
        throw std::invalid_argument(
            "v1 packet width must be 9..64 bits (8-bit header plus data, one word)");
      break;
    case Version::V2:
      if (n_switches > 2)
        throw std::invalid_argument(
            "version 2 runs one or two parallel main switches");
      break;
    case Version::P2P:
      if (n_switches != 0)
        throw std::invalid_argument("the point-to-point baseline has no switch");
      break;
  }
}

NetworkModel build(const NetworkSpec& spec) {
  spec.validate();
  NetworkModel m;
  m.spec = spec;
  const unsigned nsw = spec.switches();

  if (spec.version == Version::P2P) {
    for (unsigned s = 0; s < spec.n_sources; ++s)
      for (unsigned p = 0; p < spec.n_outputs; ++p)
        m.p2p.emplace_back(64, spec.vc_depth);
    for (unsigned p = 0; p < spec.n_outputs; ++p)
      m.sink_rr.emplace_back(spec.n_sources);
    return m;
  }

  const bool whole = spec.version == Version::V1;
  const unsigned link_bits = whole ? spec.v1_packet_bits : bits(spec.flit_width);

  for (unsigned s = 0; s < spec.n_sources; ++s) {
    std::vector<unsigned> vc_ids;
    if (!whole) {
      vc_ids = {s * 2, s * 2 + 1};
      m.input_vcs.emplace_back(link_bits, spec.vc_depth);
      m.input_vcs.emplace_back(link_bits, spec.vc_depth);
    }
    m.nas.emplace_back(s, whole ? NetworkAdapter::Mode::Whole
                                : NetworkAdapter::Mode::Flit,
                       spec.flit_width, spec.v1_packet_bits, spec.fifo_na_depth,
                       std::move(vc_ids));
  }

  for (unsigned p = 0; p < spec.n_outputs; ++p) {
    m.output_vcs.emplace_back(link_bits, spec.vc_depth);
    m.output_vcs.emplace_back(link_bits, spec.vc_depth);
    m.sink_rr.emplace_back(2);
  }

  for (unsigned k = 0; k < nsw; ++k) {
    std::vector<Switch::Slot> slots;
    for (unsigned s = 0; s < spec.n_sources; ++s) {
      if (s % nsw != k) continue;
      if (whole) {
        slots.push_back({s, -1});
      } else {
        slots.push_back({s, int(s * 2)});
        slots.push_back({s, int(s * 2 + 1)});
      }
    }
    // output vc j of a port belongs to switch j % nsw
    std::vector<std::vector<unsigned>> out_vcs(spec.n_outputs);
    for (unsigned p = 0; p < spec.n_outputs; ++p)
      for (unsigned j = 0; j < 2; ++j)
        if (j % nsw == k) out_vcs[p].push_back(p * 2 + j);
    m.switches.emplace_back(k, std::move(slots), spec.n_outputs,
                            std::move(out_vcs),
                            whole ? spec.v1_packet_bits - 8 : 0);
  }
  return m;
}

std::vector<std::string> route(const NetworkSpec& spec, unsigned source,
                               unsigned port) {
  spec.validate();
  if (source >= spec.n_sources)
    throw std::invalid_argument("unknown source " + std::to_string(source));
  if (port >= spec.n_outputs)
    throw std::invalid_argument("unknown output port " + std::to_string(port));
  std::string out = "out" + std::to_string(port);
  if (spec.version == Version::P2P)
    return {"src" + std::to_string(source),
            "q" + std::to_string(source) + "." + std::to_string(port), out};
  unsigned sw = source % spec.switches();
  return {"na" + std::to_string(source), "sw" + std::to_string(sw), out};
}

std::string describe(const NetworkSpec& spec) {
  spec.validate();
  std::ostringstream os;
  os << "version=" << name(spec.version) << " sources=" << spec.n_sources
     << " outputs=" << spec.n_outputs;
  if (spec.version == Version::P2P) {
    os << " vc_depth=" << spec.vc_depth << "\n";
    for (unsigned s = 0; s < spec.n_sources; ++s)
      for (unsigned p = 0; p < spec.n_outputs; ++p)
        os << "src" << s << " -> q" << s << "." << p << " -> out" << p << "\n";
    return os.str();
  }
  os << " switches=" << spec.switches();
  if (spec.version == Version::V1)
    os << " packet_bits=" << spec.v1_packet_bits;
  else
    os << " flit_width=" << bits(spec.flit_width);
  os << " vc_depth=" << spec.vc_depth << " fifo_na_depth=" << spec.fifo_na_depth
     << "\n";
  const unsigned nsw = spec.switches();
  for (unsigned s = 0; s < spec.n_sources; ++s) {
    unsigned sw = s % nsw;
    if (spec.version == Version::V1) {
      os << "na" << s << " -> sw" << sw << "\n";
    } else {
      os << "na" << s << " -> ivc" << s << ".0 -> sw" << sw << "\n";
      os << "na" << s << " -> ivc" << s << ".1 -> sw" << sw << "\n";
    }
  }
  for (unsigned p = 0; p < spec.n_outputs; ++p)
    for (unsigned j = 0; j < 2; ++j)
      os << "sw" << (j % nsw) << " -> ovc" << p << "." << j << " -> out" << p
         << "\n";
  return os.str();
}

}  // namespace noc
