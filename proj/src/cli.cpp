#include "noc/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "noc/config.hpp"

namespace noc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// one-run schema; richer than the sweep table because a single run keeps the
// full latency breakdown
void write_run_csv(std::ostream& os, const RunMetrics& m, uint64_t cycles,
                   uint64_t injected) {
  os << "version,switches,flit_width,vc_depth,cycles,injected,delivered,"
        "undrained,min_latency,mean_latency,max_latency,mean_transit,"
        "mean_serialization_ticks,throughput_bits_per_cycle,throughput_MBps,"
        "max_vc_occupancy,switch_stalls,adapter_stalls,status\n";
  os << name(m.version) << ',' << m.switches << ',' << m.width_bits << ','
     << m.vc_depth << ',' << cycles << ',' << injected << ',' << m.delivered
     << ',' << m.undrained << ',' << fmt(m.min_latency) << ','
     << fmt(m.mean_latency) << ',' << fmt(m.max_latency) << ','
     << fmt(m.mean_transit) << ',' << fmt(m.mean_serialization_ticks) << ','
     << fmt(m.throughput_bits_per_cycle) << ',' << fmt(m.throughput_mbps)
     << ',' << m.max_vc_occupancy << ',' << m.switch_stall_cycles << ','
     << m.adapter_stall_phases << ',' << m.status << '\n';
}

std::ofstream open_out(const std::string& path, const char* what) {
  std::ofstream f(path);
  if (!f)
    throw std::runtime_error(std::string("cannot write ") + what + " '" +
                             path + "'");
  return f;
}

void do_run(const Config& cfg, std::ostream& out) {
  cfg.network.validate();
  Engine e(cfg.network, config_kinds(cfg));
  e.load(make_trace(cfg));
  RunOptions ro;
  ro.horizon = cfg.run.horizon;
  ro.drain = cfg.run.drain;
  std::ofstream log;
  if (!cfg.run.event_log.empty()) {
    log = open_out(cfg.run.event_log, "event log");
    ro.event_log = &log;
  }
  e.run(ro);
  RunMetrics m = collect(e);
  if (cfg.dse.frequency_mhz > 0)
    m.throughput_mbps = to_bandwidth(m, cfg.dse.frequency_mhz);
  if (cfg.run.metrics_csv.empty()) {
    write_run_csv(out, m, e.cycle(), e.injected());
  } else {
    std::ofstream f = open_out(cfg.run.metrics_csv, "metrics csv");
    write_run_csv(f, m, e.cycle(), e.injected());
    out << "wrote metrics to " << cfg.run.metrics_csv << '\n';
  }
  if (!cfg.run.event_log.empty())
    out << "wrote event log to " << cfg.run.event_log << '\n';
}

void do_sweep(const Config& cfg, unsigned workers, const std::string& out_path,
              std::ostream& out) {
  std::vector<RunMetrics> rows = sweep(make_sweep(cfg), workers);
  std::string path = out_path.empty() ? cfg.dse.sweep_id + ".csv" : out_path;
  std::string dir;
  if (path == "-") {
    write_sweep_csv(out, rows);
  } else {
    std::ofstream f = open_out(path, "sweep table");
    write_sweep_csv(f, rows);
    out << "wrote " << rows.size() << " rows to " << path << '\n';
    if (size_t slash = path.find_last_of('/'); slash != std::string::npos)
      dir = path.substr(0, slash + 1);
  }
  for (const std::string& metric : cfg.dse.plot_metrics) {
    std::string svg = sweep_plot_svg(rows, metric);
    std::string pf = dir + cfg.dse.sweep_id + "_" + metric + ".svg";
    open_out(pf, "plot") << svg;
    out << "wrote " << pf << '\n';
  }
}

void do_query(const std::string& csv_path, const QueryTargets& targets,
              std::ostream& out) {
  std::ifstream f(csv_path);
  if (!f)
    throw std::runtime_error("cannot open sweep table '" + csv_path + "'");
  std::vector<RunMetrics> ranked = inverse_query(read_sweep_csv(f), targets);
  if (ranked.empty()) {
    out << "no config satisfies the targets\n";
    return;
  }
  write_sweep_csv(out, ranked);
}

void do_trace(const Config& cfg, uint64_t limit, std::ostream& out) {
  TrafficTrace trace = make_trace(cfg);
  DataKindTable kinds = config_kinds(cfg);
  size_t n = trace.messages.size();
  if (limit && limit < n) n = size_t(limit);
  for (size_t i = 0; i < n; ++i) {
    const TraceMessage& m = trace.messages[i];
    const DataKind* k = kinds.find(m.kind);
    out << "msg " << i << ": time=" << m.time << " source=" << m.source
        << " port=" << m.port << " kind="
        << (k ? k->name : "id" + std::to_string(m.kind))
        << " bits=" << m.payload.size() << '\n';
    Header h{m.kind, uint8_t(m.port), uint8_t(k ? k->int_length : 0)};
    for (const Flit& fl : flitize({h, m.payload}, cfg.network.flit_width, i))
      out << "  " << flit_debug(fl, cfg.network.flit_width) << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"time-multiplexed fat tree noc simulator and dse harness"};
  app.name("ftnoc");
  app.require_subcommand(1);

  std::string run_cfg;
  CLI::App* c_run = app.add_subcommand(
      "run", "simulate one configuration and emit its metrics row");
  c_run->add_option("-c,--config", run_cfg, "config file")->required();

  std::string sweep_cfg, sweep_out;
  unsigned workers = 1;
  CLI::App* c_sweep = app.add_subcommand(
      "sweep", "run the configured parameter grid and write the csv table");
  c_sweep->add_option("-c,--config", sweep_cfg, "config file")->required();
  c_sweep->add_option("-o,--out", sweep_out,
                      "table path ('-' for stdout; default <sweep_id>.csv)");
  c_sweep->add_option("-w,--workers", workers, "worker threads")
      ->check(CLI::PositiveNumber);

  std::string query_cfg, query_csv;
  double min_mbps = 0, max_lat = 0;
  unsigned max_depth = 0;
  CLI::App* c_query = app.add_subcommand(
      "query", "rank sweep rows that satisfy the performance targets");
  c_query->add_option("-c,--config", query_cfg, "config file with targets");
  c_query->add_option("--csv", query_csv, "sweep table to query")->required();
  CLI::Option* o_mbps = c_query->add_option("--min-throughput-mbps", min_mbps,
                                            "required bandwidth");
  CLI::Option* o_lat = c_query->add_option("--max-mean-latency", max_lat,
                                           "latency budget in cycles");
  CLI::Option* o_depth =
      c_query->add_option("--max-vc-depth", max_depth, "buffer budget");

  std::string trace_cfg;
  uint64_t trace_limit = 0;
  CLI::App* c_trace = app.add_subcommand(
      "trace", "print the workload flitized, one debug line per flit");
  c_trace->add_option("-c,--config", trace_cfg, "config file");
  c_trace->add_option("-n,--limit", trace_limit, "messages to print (0 = all)");

  std::string describe_cfg;
  CLI::App* c_describe =
      app.add_subcommand("describe", "dump the network topology");
  c_describe->add_option("-c,--config", describe_cfg, "config file");

  std::string config_cfg;
  bool defaults = false;
  CLI::App* c_config =
      app.add_subcommand("config", "print defaults or echo a parsed config");
  c_config->add_flag("--defaults", defaults, "print every default value");
  c_config->add_option("-c,--config", config_cfg, "config file to validate");

  c_run->callback([&] { do_run(load_config(run_cfg), out); });
  c_sweep->callback(
      [&] { do_sweep(load_config(sweep_cfg), workers, sweep_out, out); });
  c_query->callback([&] {
    Config cfg = query_cfg.empty() ? Config{} : load_config(query_cfg);
    QueryTargets t;
    t.min_throughput_mbps = cfg.dse.min_throughput_mbps;
    t.max_mean_latency = cfg.dse.max_mean_latency;
    t.max_vc_depth = cfg.dse.max_vc_depth;
    if (o_mbps->count()) t.min_throughput_mbps = min_mbps;
    if (o_lat->count()) t.max_mean_latency = max_lat;
    if (o_depth->count()) t.max_vc_depth = max_depth;
    do_query(query_csv, t, out);
  });
  c_trace->callback([&] {
    do_trace(trace_cfg.empty() ? Config{} : load_config(trace_cfg),
             trace_limit, out);
  });
  c_describe->callback([&] {
    Config cfg = describe_cfg.empty() ? Config{} : load_config(describe_cfg);
    cfg.network.validate();
    out << describe(cfg.network);
  });
  c_config->callback([&] {
    if (config_cfg.empty()) {
      print_defaults(out);
    } else {
      Config cfg = load_config(config_cfg);
      cfg.network.validate();
      print_config(out, cfg);
    }
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const SimFault& e) {
    err << "simulation fault: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace noc
