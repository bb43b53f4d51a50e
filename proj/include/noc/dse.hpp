#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "noc/engine.hpp"

namespace noc {

// One sweep row: the parameter point plus everything measured there.
// width_bits is the flit width for the flit-sliced fabric and the whole
// packet width for version 1.
struct RunMetrics {
  Version version = Version::V2;
  unsigned switches = 0;
  unsigned width_bits = 0;
  unsigned vc_depth = 0;

  uint64_t delivered = 0;
  uint64_t undrained = 0;
  double min_latency = 0, mean_latency = 0, max_latency = 0;
  double mean_transit = 0;
  double mean_serialization_ticks = 0;
  double throughput_bits_per_cycle = 0;
  double throughput_mbps = 0;
  unsigned max_vc_occupancy = 0;
  uint64_t switch_stall_cycles = 0;
  uint64_t adapter_stall_phases = 0;
  std::string status;  // "ok" | "incomplete" | "failed: ..."

  uint64_t stall_total() const {
    return switch_stall_cycles + adapter_stall_phases;
  }
};

// Aggregates a finished run. Throws SimFault when a measurement breaks the
// capacity or latency-floor invariants (that would mean the model cheated).
RunMetrics collect(const Engine& engine);

// bits/cycle at f MHz into decimal MB/s.
double to_bandwidth(const RunMetrics& m, double f_mhz);

struct SweepSpec {
  std::vector<std::pair<Version, unsigned>> versions;  // (version, switches)
  std::vector<unsigned> widths;  // bits
  std::vector<unsigned> depths;
  NetworkSpec base;       // shape defaults; version/width/depth overridden
  TrafficTrace trace;
  RunOptions run;
  double frequency_mhz = 0;  // 0 leaves MB/s at 0
  DataKindTable kinds = auth_kinds();
};

// One row per (version, width, depth) in cartesian order. A faulting run
// becomes a "failed: ..." row; the sweep continues. Worker count never
// changes the result.
std::vector<RunMetrics> sweep(const SweepSpec& spec, unsigned workers = 1);

void write_sweep_csv(std::ostream& os, const std::vector<RunMetrics>& rows);
std::vector<RunMetrics> read_sweep_csv(std::istream& is);

// Performance targets mapped back to parameter choices.
struct QueryTargets {
  std::optional<double> min_throughput_mbps;
  std::optional<double> max_mean_latency;
  std::optional<unsigned> max_vc_depth;
  bool any() const {
    return min_throughput_mbps || max_mean_latency || max_vc_depth;
  }
};

// All ok rows meeting every target, cheapest first: fewest switches, then
// smallest depth, then smallest width, then sweep order.
std::vector<RunMetrics> inverse_query(const std::vector<RunMetrics>& rows,
                                      const QueryTargets& targets);

// Line plot of one metric against vc_depth, one polyline per
// (version, switches, width) series. Metrics: delivered, mean_latency,
// max_latency, throughput_bits_per_cycle, throughput_MBps,
// max_vc_occupancy, stall_cycles.
std::string sweep_plot_svg(const std::vector<RunMetrics>& rows,
                           const std::string& metric);

}  // namespace noc
