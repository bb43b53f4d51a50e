#include "noc/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace noc {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

uint64_t parse_u64(const std::string& v) {
  if (v.empty() || !std::isdigit(static_cast<unsigned char>(v[0])))
    throw std::invalid_argument("expected an unsigned number, got '" + v + "'");
  size_t pos = 0;
  uint64_t out = std::stoull(v, &pos);
  if (pos != v.size())
    throw std::invalid_argument("trailing junk in number '" + v + "'");
  return out;
}

unsigned parse_u32(const std::string& v) {
  uint64_t out = parse_u64(v);
  if (out > 0xFFFFFFFFull)
    throw std::invalid_argument("value out of range: '" + v + "'");
  return unsigned(out);
}

double parse_dbl(const std::string& v) {
  size_t pos = 0;
  double out = std::stod(v, &pos);
  if (pos != v.size())
    throw std::invalid_argument("trailing junk in number '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      if (std::string t = trim(cur); !t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (std::string t = trim(cur); !t.empty()) out.push_back(t);
  return out;
}

std::vector<unsigned> parse_u32_list(const std::string& v) {
  std::vector<unsigned> out;
  for (const std::string& item : split_list(v)) out.push_back(parse_u32(item));
  return out;
}

unsigned default_switches(Version v) {
  NetworkSpec s;
  s.version = v;
  return v == Version::P2P ? 0 : s.switches();
}

// "v2:2" pins the switch count; a bare "v2" takes the version default
std::vector<std::pair<Version, unsigned>> parse_versions(
    const std::string& v) {
  std::vector<std::pair<Version, unsigned>> out;
  for (const std::string& item : split_list(v)) {
    size_t colon = item.find(':');
    if (colon == std::string::npos) {
      Version ver = parse_version(trim(item));
      out.push_back({ver, default_switches(ver)});
    } else {
      Version ver = parse_version(trim(item.substr(0, colon)));
      out.push_back({ver, parse_u32(trim(item.substr(colon + 1)))});
    }
  }
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// shortest %g form that parses back exactly
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  if (std::stod(buf) == v) return buf;
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, std::string>)
      out += xs[i];
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

void apply_network(NetworkSpec& n, const std::string& key,
                   const std::string& val) {
  if (key == "version")
    n.version = parse_version(val);
  else if (key == "sources")
    n.n_sources = parse_u32(val);
  else if (key == "outputs")
    n.n_outputs = parse_u32(val);
  else if (key == "flit_width")
    n.flit_width = parse_flit_width(parse_u32(val));
  else if (key == "packet_bits")
    n.v1_packet_bits = parse_u32(val);
  else if (key == "vc_depth")
    n.vc_depth = parse_u32(val);
  else if (key == "fifo_depth")
    n.fifo_na_depth = parse_u32(val);
  else if (key == "switches")
    n.n_switches = parse_u32(val);
  else
    throw std::out_of_range(key);
}

void apply_workload(WorkloadConfig& w, const std::string& key,
                    const std::string& val) {
  if (key == "source") {
    if (val != "auth" && val != "synthetic" && val != "trace")
      throw std::invalid_argument("unknown workload source '" + val +
                                  "' (expected auth, synthetic or trace)");
    w.source = val;
  } else if (key == "trace_file")
    w.trace_file = val;
  else if (key == "regions")
    w.regions = parse_u32(val);
  else if (key == "wavelengths")
    w.wavelengths = parse_u32(val);
  else if (key == "window")
    w.window = parse_u32(val);
  else if (key == "start_time")
    w.start_time = parse_u64(val);
  else if (key == "spacing")
    w.spacing = parse_u64(val);
  else if (key == "rate")
    w.rate = parse_dbl(val);
  else if (key == "cycles")
    w.cycles = parse_u64(val);
  else if (key == "seed")
    w.seed = parse_u64(val);
  else if (key == "payload_bits")
    w.payload_bits = parse_u32(val);
  else
    throw std::out_of_range(key);
}

void apply_run(RunConfig& r, const std::string& key, const std::string& val) {
  if (key == "horizon")
    r.horizon = parse_u64(val);
  else if (key == "drain")
    r.drain = parse_bool(val);
  else if (key == "event_log")
    r.event_log = val;
  else if (key == "metrics_csv")
    r.metrics_csv = val;
  else
    throw std::out_of_range(key);
}

void apply_dse(DseConfig& d, const std::string& key, const std::string& val) {
  if (key == "versions")
    d.versions = parse_versions(val);
  else if (key == "widths")
    d.widths = parse_u32_list(val);
  else if (key == "depths")
    d.depths = parse_u32_list(val);
  else if (key == "frequency_mhz")
    d.frequency_mhz = parse_dbl(val);
  else if (key == "sweep_id")
    d.sweep_id = val;
  else if (key == "plot_metrics")
    d.plot_metrics = split_list(val);
  else if (key == "min_throughput_mbps")
    d.min_throughput_mbps =
        val.empty() ? std::nullopt : std::optional<double>(parse_dbl(val));
  else if (key == "max_mean_latency")
    d.max_mean_latency =
        val.empty() ? std::nullopt : std::optional<double>(parse_dbl(val));
  else if (key == "max_vc_depth")
    d.max_vc_depth =
        val.empty() ? std::nullopt : std::optional<unsigned>(parse_u32(val));
  else
    throw std::out_of_range(key);
}

}  // namespace

Config parse_config(std::istream& is, const std::string& name) {
  Config cfg;
  std::string section;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (size_t hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name, lineno, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "network" && section != "workload" && section != "run" &&
          section != "dse")
        throw ConfigError(name, lineno,
                          "unknown section '[" + section + "]'");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name, lineno, "expected key = value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError(name, lineno, "key '" + key + "' outside a section");
    try {
      if (section == "network")
        apply_network(cfg.network, key, val);
      else if (section == "workload")
        apply_workload(cfg.workload, key, val);
      else if (section == "run")
        apply_run(cfg.run, key, val);
      else
        apply_dse(cfg.dse, key, val);
    } catch (const std::out_of_range&) {
      throw ConfigError(name, lineno,
                        "unknown key '" + key + "' in [" + section + "]");
    } catch (const std::exception& e) {
      throw ConfigError(name, lineno,
                        "bad value for " + key + ": " + e.what());
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
  size_t slash = path.find_last_of('/');
  return parse_config(f, slash == std::string::npos ? path
                                                    : path.substr(slash + 1));
}

void print_config(std::ostream& os, const Config& cfg) {
  const NetworkSpec& n = cfg.network;
  os << "[network]\n"
     << "version = " << lower(name(n.version)) << '\n'
     << "sources = " << n.n_sources << '\n'
     << "outputs = " << n.n_outputs << '\n'
     << "flit_width = " << bits(n.flit_width) << '\n'
     << "packet_bits = " << n.v1_packet_bits << '\n'
     << "vc_depth = " << n.vc_depth << '\n'
     << "fifo_depth = " << n.fifo_na_depth << '\n'
     << "switches = " << n.n_switches << "\n\n";

  const WorkloadConfig& w = cfg.workload;
  auto kv = [&os](const char* key, const std::string& val) {
    os << key << " =" << (val.empty() ? "" : " " + val) << '\n';
  };
  os << "[workload]\n";
  kv("source", w.source);
  kv("trace_file", w.trace_file);
  os << "regions = " << w.regions << '\n'
     << "wavelengths = " << w.wavelengths << '\n'
     << "window = " << w.window << '\n'
     << "start_time = " << w.start_time << '\n'
     << "spacing = " << w.spacing << '\n'
     << "rate = " << fmt(w.rate) << '\n'
     << "cycles = " << w.cycles << '\n'
     << "seed = " << w.seed << '\n'
     << "payload_bits = " << w.payload_bits << "\n\n";

  const RunConfig& r = cfg.run;
  os << "[run]\n"
     << "horizon = " << r.horizon << '\n'
     << "drain = " << (r.drain ? "true" : "false") << '\n';
  kv("event_log", r.event_log);
  kv("metrics_csv", r.metrics_csv);
  os << '\n';

  const DseConfig& d = cfg.dse;
  std::string vers;
  for (size_t i = 0; i < d.versions.size(); ++i) {
    if (i) vers += ", ";
    vers += lower(name(d.versions[i].first)) + ":" +
            std::to_string(d.versions[i].second);
  }
  os << "[dse]\n";
  kv("versions", vers);
  kv("widths", join(d.widths));
  kv("depths", join(d.depths));
  os << "frequency_mhz = " << fmt(d.frequency_mhz) << '\n';
  kv("sweep_id", d.sweep_id);
  kv("plot_metrics", join(d.plot_metrics));
  kv("min_throughput_mbps",
     d.min_throughput_mbps ? fmt(*d.min_throughput_mbps) : "");
  kv("max_mean_latency", d.max_mean_latency ? fmt(*d.max_mean_latency) : "");
  kv("max_vc_depth",
     d.max_vc_depth ? std::to_string(*d.max_vc_depth) : "");
}

void print_defaults(std::ostream& os) { print_config(os, Config{}); }

DataKindTable config_kinds(const Config& cfg) {
  if (cfg.workload.payload_bits == 0) return auth_kinds();
  return DataKindTable{{{0, "synthetic", cfg.workload.payload_bits, 4}}};
}

TrafficTrace make_trace(const Config& cfg) {
  const WorkloadConfig& w = cfg.workload;
  if (w.source == "auth") {
    AuthTraceSpec s;
    s.regions = w.regions;
    s.wavelengths = w.wavelengths;
    s.window = w.window;
    s.sources = cfg.network.n_sources;
    s.start_time = w.start_time;
    s.spacing = w.spacing;
    return generate_auth_trace(s);
  }
  if (w.source == "synthetic") {
    SyntheticSpec s;
    s.rate = w.rate;
    s.cycles = w.cycles;
    s.seed = w.seed;
    s.sources = cfg.network.n_sources;
    s.ports = cfg.network.n_outputs;
    s.kinds = config_kinds(cfg);
    return synthetic_uniform(s);
  }
  std::ifstream f(w.trace_file);
  if (!f)
    throw std::runtime_error("cannot open trace file '" + w.trace_file + "'");
  return read_trace_csv(f, config_kinds(cfg));
}

SweepSpec make_sweep(const Config& cfg) {
  SweepSpec s;
  s.versions = cfg.dse.versions;
  s.widths = cfg.dse.widths;
  s.depths = cfg.dse.depths;
  s.base = cfg.network;
  s.trace = make_trace(cfg);
  s.run.horizon = cfg.run.horizon;
  s.run.drain = cfg.run.drain;
  s.run.event_log = nullptr;
  s.frequency_mhz = cfg.dse.frequency_mhz;
  s.kinds = config_kinds(cfg);
  return s;
}

}  // namespace noc
