#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "noc/config.hpp"

using namespace noc;

namespace {

Config parse_str(const std::string& text, const std::string& name = "test.ini") {
  std::istringstream is(text);
  return parse_config(is, name);
}

// every key with its default, in file order; config --defaults prints this
const char* kDefaultDump =
    "[network]\n"
    "version = v2\n"
    "sources = 4\n"
    "outputs = 4\n"
    "flit_width = 8\n"
    "packet_bits = 24\n"
    "vc_depth = 32\n"
    "fifo_depth = 4\n"
    "switches = 0\n"
    "\n"
    "[workload]\n"
    "source = auth\n"
    "trace_file =\n"
    "regions = 1\n"
    "wavelengths = 1\n"
    "window = 2\n"
    "start_time = 0\n"
    "spacing = 1\n"
    "rate = 0.1\n"
    "cycles = 1000\n"
    "seed = 1\n"
    "payload_bits = 0\n"
    "\n"
    "[run]\n"
    "horizon = 0\n"
    "drain = true\n"
    "event_log =\n"
    "metrics_csv =\n"
    "\n"
    "[dse]\n"
    "versions = v1:1, v2:2\n"
    "widths = 8, 16, 32\n"
    "depths = 8, 32\n"
    "frequency_mhz = 292.31\n"
    "sweep_id = sweep\n"
    "plot_metrics =\n"
    "min_throughput_mbps =\n"
    "max_mean_latency =\n"
    "max_vc_depth =\n";

}  // namespace

TEST_CASE("default config matches the documented values") {
  Config c;
  CHECK(c.network.version == Version::V2);
  CHECK(c.network.n_sources == 4);
  CHECK(c.network.flit_width == FlitWidth::w8);
  CHECK(c.network.vc_depth == 32);
  CHECK(c.network.n_switches == 0);
  CHECK(c.workload.source == "auth");
  CHECK(c.workload.rate == 0.1);
  CHECK(c.workload.cycles == 1000);
  CHECK(c.workload.seed == 1);
  CHECK(c.run.horizon == 0);
  CHECK(c.run.drain);
  CHECK(c.dse.versions ==
        std::vector<std::pair<Version, unsigned>>{{Version::V1, 1},
                                                  {Version::V2, 2}});
  CHECK(c.dse.widths == std::vector<unsigned>{8, 16, 32});
  CHECK(c.dse.depths == std::vector<unsigned>{8, 32});
  CHECK(c.dse.frequency_mhz == 292.31);
  CHECK(c.dse.sweep_id == "sweep");
  CHECK_FALSE(c.dse.min_throughput_mbps.has_value());
}

TEST_CASE("defaults dump is frozen and parses back to the defaults") {
  std::ostringstream os;
  print_defaults(os);
  CHECK(os.str() == kDefaultDump);
  CHECK(parse_str(os.str()) == Config{});
}

TEST_CASE("print/parse round trip preserves a fully customized config") {
  Config c;
  c.network.version = Version::V1;
  c.network.n_sources = 2;
  c.network.n_outputs = 3;
  c.network.flit_width = FlitWidth::w32;
  c.network.v1_packet_bits = 40;
  c.network.vc_depth = 8;
  c.network.fifo_na_depth = 2;
  c.network.n_switches = 1;
  c.workload.source = "synthetic";
  c.workload.trace_file = "in.csv";
  c.workload.regions = 5;
  c.workload.wavelengths = 3;
  c.workload.window = 16;
  c.workload.start_time = 7;
  c.workload.spacing = 2;
  c.workload.rate = 0.375;
  c.workload.cycles = 2500;
  c.workload.seed = 99;
  c.workload.payload_bits = 16;
  c.run.horizon = 5000;
  c.run.drain = false;
  c.run.event_log = "events.csv";
  c.run.metrics_csv = "metrics.csv";
  c.dse.versions = {{Version::P2P, 0}, {Version::V2, 1}};
  c.dse.widths = {16};
  c.dse.depths = {2, 4, 8};
  c.dse.frequency_mhz = 100.0;
  c.dse.sweep_id = "night";
  c.dse.plot_metrics = {"mean_latency", "throughput_MBps"};
  c.dse.min_throughput_mbps = 300.0;
  c.dse.max_mean_latency = 20.5;
  c.dse.max_vc_depth = 8;

  std::ostringstream os;
  print_config(os, c);
  CHECK(parse_str(os.str()) == c);
}

TEST_CASE("parser accepts comments, blanks and loose whitespace") {
  Config c = parse_str(
      "# top comment\n"
      "\n"
      "[network]\n"
      "  vc_depth=16   # deep enough\n"
      "\tswitches =\t1\n"
      "[run]\n"
      "drain = no\n");
  CHECK(c.network.vc_depth == 16);
  CHECK(c.network.n_switches == 1);
  CHECK_FALSE(c.run.drain);
  // untouched keys keep their defaults
  CHECK(c.network.n_sources == 4);
}

TEST_CASE("boolean and list forms") {
  CHECK(parse_str("[run]\ndrain = yes\n").run.drain);
  CHECK(parse_str("[run]\ndrain = 1\n").run.drain);
  CHECK_FALSE(parse_str("[run]\ndrain = off\n").run.drain);
  Config c = parse_str("[dse]\nversions = p2p, v1\nwidths = 32\ndepths=2,4\n");
  // a bare version name takes its default switch count
  CHECK(c.dse.versions ==
        std::vector<std::pair<Version, unsigned>>{{Version::P2P, 0},
                                                  {Version::V1, 1}});
  CHECK(c.dse.widths == std::vector<unsigned>{32});
  CHECK(c.dse.depths == std::vector<unsigned>{2, 4});
}

TEST_CASE("diagnostics carry file name, line and key") {
  auto fails = [](const std::string& text, const std::string& needle,
                  std::size_t line) {
    try {
      parse_str(text, "bad.ini");
      FAIL("expected ConfigError for: " << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("bad.ini:") == 0);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      CHECK(e.line() == line);
    }
  };
  fails("[engine]\n", "unknown section", 1);
  fails("[network]\nbogus = 1\n", "unknown key 'bogus' in [network]", 2);
  fails("vc_depth = 4\n", "outside", 1);
  fails("[network]\nvc_depth\n", "expected key = value", 2);
  fails("[network]\nvc_depth = soon\n", "vc_depth", 2);
  fails("[network]\nversion = v3\n", "v3", 2);
  fails("[network]\nflit_width = 12\n", "flit width", 2);
  fails("[run]\ndrain = maybe\n", "boolean", 2);
  fails("[workload]\nsource = random\n", "source", 2);
  fails("[dse]\nversions = v1:x\n", "versions", 2);
  fails("[network]\nsources = -3\n", "sources", 2);
}

TEST_CASE("config_kinds: auth table by default, single kind on override") {
  Config c;
  DataKindTable t = config_kinds(c);
  REQUIRE(t.kinds.size() == 4);
  CHECK(t.by_id(0).name == "project");
  c.workload.payload_bits = 16;
  t = config_kinds(c);
  REQUIRE(t.kinds.size() == 1);
  CHECK(t.by_id(0).payload_bits == 16);
  CHECK(t.by_id(0).int_length == 4);
}

TEST_CASE("make_trace: auth source mirrors the generator spec") {
  Config c;
  c.workload.regions = 3;
  c.workload.wavelengths = 2;
  c.workload.window = 4;
  c.workload.start_time = 5;
  c.workload.spacing = 3;
  c.network.n_sources = 2;
  AuthTraceSpec s;
  s.regions = 3;
  s.wavelengths = 2;
  s.window = 4;
  s.sources = 2;
  s.start_time = 5;
  s.spacing = 3;
  CHECK(make_trace(c).messages == generate_auth_trace(s).messages);
}

TEST_CASE("make_trace: synthetic source uses network shape and kind override") {
  Config c;
  c.workload.source = "synthetic";
  c.workload.rate = 0.5;
  c.workload.cycles = 40;
  c.workload.seed = 7;
  c.workload.payload_bits = 16;
  c.network.n_sources = 3;
  c.network.n_outputs = 2;
  TrafficTrace t = make_trace(c);
  SyntheticSpec s;
  s.rate = 0.5;
  s.cycles = 40;
  s.seed = 7;
  s.sources = 3;
  s.ports = 2;
  s.kinds = config_kinds(c);
  CHECK(t.messages == synthetic_uniform(s).messages);
  REQUIRE(!t.messages.empty());
  for (const TraceMessage& m : t.messages) {
    CHECK(m.kind == 0);
    CHECK(m.payload.size() == 16);
    CHECK(m.port < 2);
  }
}

TEST_CASE("make_trace: trace source reads the csv and missing files throw") {
  Config c;
  c.workload.source = "trace";
  c.workload.trace_file = "/tmp/noc_test_trace.csv";
  TrafficTrace orig = generate_auth_trace(AuthTraceSpec{});
  {
    std::ofstream f(c.workload.trace_file);
    write_trace_csv(f, orig);
  }
  CHECK(make_trace(c).messages == orig.messages);
  c.workload.trace_file = "/tmp/definitely_missing_498512.csv";
  CHECK_THROWS_WITH_AS(make_trace(c), doctest::Contains("cannot open"),
                       std::runtime_error);
  c.workload.trace_file.clear();
  CHECK_THROWS_AS(make_trace(c), std::runtime_error);
}

TEST_CASE("make_sweep maps all sections onto the sweep spec") {
  Config c;
  c.network.vc_depth = 16;
  c.workload.regions = 2;
  c.run.horizon = 123;
  c.run.drain = false;
  c.dse.versions = {{Version::V2, 2}};
  c.dse.widths = {8, 16};
  c.dse.depths = {4};
  c.dse.frequency_mhz = 150.0;
  SweepSpec s = make_sweep(c);
  CHECK(s.base == c.network);
  CHECK(s.versions == c.dse.versions);
  CHECK(s.widths == c.dse.widths);
  CHECK(s.depths == c.dse.depths);
  CHECK(s.frequency_mhz == 150.0);
  CHECK(s.run.horizon == 123);
  CHECK_FALSE(s.run.drain);
  CHECK(s.run.event_log == nullptr);
  CHECK(s.trace.messages == make_trace(c).messages);
  CHECK(s.kinds.kinds.size() == 4);
}

TEST_CASE("load_config reads a file and reports its path in errors") {
  {
    std::ofstream f("/tmp/noc_test_cfg.ini");
    f << "[network]\nvc_depth = 12\n";
  }
  CHECK(load_config("/tmp/noc_test_cfg.ini").network.vc_depth == 12);
  {
    std::ofstream f("/tmp/noc_test_cfg.ini");
    f << "[network]\nvc_depth = twelve\n";
  }
  CHECK_THROWS_WITH_AS(load_config("/tmp/noc_test_cfg.ini"),
                       doctest::Contains("noc_test_cfg.ini:2"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config("/tmp/missing_cfg_563.ini"),
                       doctest::Contains("cannot open"), std::runtime_error);
}
