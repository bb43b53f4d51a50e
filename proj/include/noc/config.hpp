#pragma once
// run configuration: one flat `key = value` file with [section] headers.
// every key has a default; unknown sections and keys are rejected with the
// offending line so a typo cannot silently fall back to a default.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noc/dse.hpp"

namespace noc {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& file, std::size_t line,
              const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// [workload] section. `source` picks the generator: auth (the image pipeline
// trace), synthetic (Bernoulli uniform), or trace (read trace_file as csv).
struct WorkloadConfig {
  std::string source = "auth";
  std::string trace_file;
  unsigned regions = 1;
  unsigned wavelengths = 1;
  unsigned window = 2;
  uint64_t start_time = 0;
  uint64_t spacing = 1;
  double rate = 0.1;
  uint64_t cycles = 1000;
  uint64_t seed = 1;
  unsigned payload_bits = 0;  // synthetic only; 0 = per-kind wire sizes
  bool operator==(const WorkloadConfig&) const = default;
};

// [run] section. horizon 0 means run until the network drains.
struct RunConfig {
  uint64_t horizon = 0;
  bool drain = true;
  std::string event_log;    // file path; empty disables logging
  std::string metrics_csv;  // file path; empty prints to stdout
  bool operator==(const RunConfig&) const = default;
};

// [dse] section: the sweep grid, the conversion frequency, and the optional
// query targets applied by the query subcommand.
struct DseConfig {
  std::vector<std::pair<Version, unsigned>> versions = {{Version::V1, 1},
                                                        {Version::V2, 2}};
  std::vector<unsigned> widths = {8, 16, 32};
  std::vector<unsigned> depths = {8, 32};
  double frequency_mhz = 292.31;
  std::string sweep_id = "sweep";
  std::vector<std::string> plot_metrics;  // one svg per listed metric
  std::optional<double> min_throughput_mbps;
  std::optional<double> max_mean_latency;
  std::optional<unsigned> max_vc_depth;
  bool operator==(const DseConfig&) const = default;
};

struct Config {
  NetworkSpec network;
  WorkloadConfig workload;
  RunConfig run;
  DseConfig dse;
  bool operator==(const Config&) const = default;
};

// `name` feeds the diagnostics ("<name>:<line>: ...").
Config parse_config(std::istream& is, const std::string& name = "config");
Config load_config(const std::string& path);

// Prints every key; the output parses back to an equal Config.
void print_config(std::ostream& os, const Config& cfg);
void print_defaults(std::ostream& os);

// The kind table the engine and the generators share: the auth pipeline
// stages, or a single synthetic kind when payload_bits overrides them.
DataKindTable config_kinds(const Config& cfg);

// Builds the [workload] traffic; reads trace_file when source = trace.
TrafficTrace make_trace(const Config& cfg);

// Assembles the sweep described by [network] + [workload] + [run] + [dse].
SweepSpec make_sweep(const Config& cfg);

}  // namespace noc
