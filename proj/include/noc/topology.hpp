#pragma once

#include <string>
#include <vector>

#include "noc/fabric.hpp"

namespace noc {

enum class Version { V1, V2, P2P };

const char* name(Version v);
Version parse_version(const std::string& s);

// Fixed-shape network description. Every knob that the sweeps explore lives
// here; validate() rejects anything the hardware model cannot express.
struct NetworkSpec {
  Version version = Version::V2;
  unsigned n_sources = 4;
  unsigned n_outputs = 4;
  FlitWidth flit_width = FlitWidth::w8;  // flit-sliced versions only
  unsigned v1_packet_bits = 24;          // whole-packet width incl. 8-bit header
  unsigned vc_depth = 32;
  unsigned fifo_na_depth = 4;
  unsigned n_switches = 0;  // 0 = version default (V1: 1, V2: 2, P2P: none)

  unsigned switches() const;  // resolved count
  void validate() const;      // throws std::invalid_argument
  bool operator==(const NetworkSpec&) const = default;
};

// A built instance. Component vectors are indexed by the id scheme the
// describe() dump uses: input vc source*2+j, output vc port*2+j, p2p queue
// source*n_outputs+port.
struct NetworkModel {
  NetworkSpec spec;
  std::vector<NetworkAdapter> nas;
  std::vector<VirtualChannel> input_vcs;
  std::vector<VirtualChannel> output_vcs;
  std::vector<Switch> switches;
  std::vector<VirtualChannel> p2p;
  std::vector<RoundRobinArbiter> sink_rr;  // one per output module
};

NetworkModel build(const NetworkSpec& spec);

// Static route of a (source, dest port) pair as a component-name list.
std::vector<std::string> route(const NetworkSpec& spec, unsigned source,
                               unsigned port);

// Text edge list of the built shape, one edge per line after a summary line.
std::string describe(const NetworkSpec& spec);

}  // namespace noc
