#include "noc/dse.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace noc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

uint64_t latency_floor(const NetworkSpec& spec, const PacketRecord& r) {
  switch (spec.version) {
    case Version::V2:
      return flit_count(r.payload.size(), spec.flit_width) + 3;
    case Version::V1:
      return 4;  // intake, pack+latch, crossing, output store
    case Version::P2P:
      return 1;
  }
  return 0;
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

RunMetrics collect(const Engine& e) {
  const NetworkSpec& spec = e.model().spec;
  RunMetrics m;
  m.version = spec.version;
  m.switches = spec.switches();
  m.width_bits = spec.version == Version::V1   ? spec.v1_packet_bits
                 : spec.version == Version::V2 ? bits(spec.flit_width)
                                               : 0;
  m.vc_depth = spec.vc_depth;
  m.delivered = e.delivered();
  m.undrained = e.undrained();

  uint64_t n = 0, nt = 0, ns = 0;
  double sum = 0, tsum = 0, ssum = 0, mn = 0, mx = 0;
  for (const PacketRecord& r : e.records()) {
    if (!r.complete()) continue;
    double lat = double(r.total_latency());
    if (lat < double(latency_floor(spec, r)))
      throw SimFault("packet " + std::to_string(r.id) +
                     " finished below the analytic latency floor");
    if (!n || lat < mn) mn = lat;
    if (!n || lat > mx) mx = lat;
    sum += lat;
    ++n;
    if (r.header_emit && r.header_deliver) {
      tsum += double(r.transit_latency());
      ++nt;
    }
    if (r.header_tick && r.tail_tick) {
      ssum += double(r.serialization_ticks());
      ++ns;
    }
  }
  m.min_latency = mn;
  m.max_latency = mx;
  m.mean_latency = n ? sum / double(n) : 0.0;
  m.mean_transit = nt ? tsum / double(nt) : 0.0;
  m.mean_serialization_ticks = ns ? ssum / double(ns) : 0.0;

  m.throughput_bits_per_cycle =
      e.cycle() ? double(e.payload_bits_delivered()) / double(e.cycle()) : 0.0;
  if (spec.version != Version::P2P &&
      m.throughput_bits_per_cycle >
          double(m.width_bits) * double(m.switches) + 1e-9)
    throw SimFault("measured throughput exceeds the aggregate link capacity");

  const NetworkModel& model = e.model();
  for (const auto* vcs : {&model.input_vcs, &model.output_vcs, &model.p2p})
    for (const VirtualChannel& vc : *vcs)
      m.max_vc_occupancy = std::max(m.max_vc_occupancy, vc.max_occupancy());
  for (const Switch& sw : model.switches) m.switch_stall_cycles += sw.stall_cycles();
  for (const NetworkAdapter& na : model.nas)
    m.adapter_stall_phases += na.stall_phases();

  m.status = m.delivered ? "ok" : "incomplete";
  return m;
}

double to_bandwidth(const RunMetrics& m, double f_mhz) {
  if (!(f_mhz > 0)) throw std::invalid_argument("frequency must be positive");
  return m.throughput_bits_per_cycle * f_mhz / 8.0;
}

std::vector<RunMetrics> sweep(const SweepSpec& spec, unsigned workers) {
  struct Point {
    Version v;
    unsigned sw, w, d;
  };
  std::vector<Point> pts;
  for (auto [v, sw] : spec.versions)
    for (unsigned w : spec.widths)
      for (unsigned d : spec.depths) pts.push_back({v, sw, w, d});

  std::vector<RunMetrics> rows(pts.size());
  auto work = [&](size_t i) {
    const Point& p = pts[i];
    try {
      NetworkSpec ns = spec.base;
      ns.version = p.v;
      ns.n_switches = p.sw;
      ns.vc_depth = p.d;
      if (p.v == Version::V1)
        ns.v1_packet_bits = p.w;
      else if (p.v == Version::V2)
        ns.flit_width = parse_flit_width(p.w);
      Engine e(ns, spec.kinds);
      e.load(spec.trace);
      RunOptions ro = spec.run;
      ro.event_log = nullptr;  // logs and workers do not mix
      e.run(ro);
      rows[i] = collect(e);
      if (spec.frequency_mhz > 0)
        rows[i].throughput_mbps = to_bandwidth(rows[i], spec.frequency_mhz);
    } catch (const std::exception& ex) {
      RunMetrics m;
      m.version = p.v;
      m.switches = p.sw;
      m.width_bits = p.w;
      m.vc_depth = p.d;
      m.status = "failed: " + sanitize(ex.what());
      rows[i] = std::move(m);
    }
  };

  unsigned n = std::max<size_t>(1, std::min<size_t>(workers, pts.size()));
  if (n <= 1) {
    for (size_t i = 0; i < pts.size(); ++i) work(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k)
      pool.emplace_back([&] {
        for (size_t i = next++; i < pts.size(); i = next++) work(i);
      });
    for (auto& t : pool) t.join();
  }
  return rows;
}

static const char* kSweepHeader =
    "version,switches,flit_width,vc_depth,delivered,mean_latency,max_latency,"
    "throughput_bits_per_cycle,throughput_MBps,max_vc_occupancy,stall_cycles,"
    "status";

void write_sweep_csv(std::ostream& os, const std::vector<RunMetrics>& rows) {
  os << kSweepHeader << '\n';
  for (const RunMetrics& m : rows)
    os << name(m.version) << ',' << m.switches << ',' << m.width_bits << ','
       << m.vc_depth << ',' << m.delivered << ',' << fmt(m.mean_latency) << ','
       << fmt(m.max_latency) << ',' << fmt(m.throughput_bits_per_cycle) << ','
       << fmt(m.throughput_mbps) << ',' << m.max_vc_occupancy << ','
       << m.stall_total() << ',' << sanitize(m.status) << '\n';
}

std::vector<RunMetrics> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) ||
      (line.back() == '\r' ? line.substr(0, line.size() - 1) : line) !=
          kSweepHeader)
    throw std::runtime_error("sweep csv line 1: bad or missing header");
  std::vector<RunMetrics> rows;
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv(line);
    try {
      if (f.size() < 12) throw std::runtime_error("expected 12 columns");
      RunMetrics m;
      m.version = parse_version(f[0]);
      m.switches = unsigned(std::stoul(f[1]));
      m.width_bits = unsigned(std::stoul(f[2]));
      m.vc_depth = unsigned(std::stoul(f[3]));
      m.delivered = std::stoull(f[4]);
      m.mean_latency = std::stod(f[5]);
      m.max_latency = std::stod(f[6]);
      m.throughput_bits_per_cycle = std::stod(f[7]);
      m.throughput_mbps = std::stod(f[8]);
      m.max_vc_occupancy = unsigned(std::stoul(f[9]));
      m.switch_stall_cycles = std::stoull(f[10]);
      m.status = f[11];
      for (size_t k = 12; k < f.size(); ++k) m.status += "," + f[k];
      rows.push_back(std::move(m));
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep csv line " + std::to_string(lineno) +
                               ": " + e.what());
    }
  }
  return rows;
}

std::vector<RunMetrics> inverse_query(const std::vector<RunMetrics>& rows,
                                      const QueryTargets& targets) {
  if (!targets.any())
    throw std::invalid_argument("a query needs at least one target");
  using Key = std::tuple<unsigned, unsigned, unsigned, size_t>;
  std::vector<std::pair<Key, const RunMetrics*>> keep;
  size_t idx = 0;
  for (const RunMetrics& r : rows) {
    ++idx;
    if (r.status != "ok") continue;
    if (targets.min_throughput_mbps &&
        r.throughput_mbps < *targets.min_throughput_mbps)
      continue;
    if (targets.max_mean_latency && r.mean_latency > *targets.max_mean_latency)
      continue;
    if (targets.max_vc_depth && r.vc_depth > *targets.max_vc_depth) continue;
    keep.push_back({{r.switches, r.vc_depth, r.width_bits, idx}, &r});
  }
  std::sort(keep.begin(), keep.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<RunMetrics> out;
  out.reserve(keep.size());
  for (auto& [key, r] : keep) out.push_back(*r);
  return out;
}

std::string sweep_plot_svg(const std::vector<RunMetrics>& rows,
                           const std::string& metric) {
  auto value = [&](const RunMetrics& m) -> double {
    if (metric == "delivered") return double(m.delivered);
    if (metric == "mean_latency") return m.mean_latency;
    if (metric == "max_latency") return m.max_latency;
    if (metric == "throughput_bits_per_cycle")
      return m.throughput_bits_per_cycle;
    if (metric == "throughput_MBps") return m.throughput_mbps;
    if (metric == "max_vc_occupancy") return double(m.max_vc_occupancy);
    if (metric == "stall_cycles") return double(m.stall_total());
    throw std::invalid_argument("unknown plot metric '" + metric + "'");
  };

  // series keyed by (version, switches, width), points (depth, value)
  std::map<std::tuple<int, unsigned, unsigned>,
           std::vector<std::pair<unsigned, double>>>
      series;
  for (const RunMetrics& m : rows) {
    if (m.status != "ok") continue;
    series[{int(m.version), m.switches, m.width_bits}].push_back(
        {m.vc_depth, value(m)});
  }
  if (series.empty())
    throw std::invalid_argument("nothing to plot: no ok rows");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (auto [d, v] : pts) {
      xmin = std::min(xmin, double(d));
      xmax = std::max(xmax, double(d));
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (xmax == xmin) (xmax += 1), (xmin -= 1);
  if (ymax == ymin) (ymax += 1), (ymin -= 1);

  const double L = 70, T = 40, W = 410, H = 310;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * W; };
  auto py = [&](double y) { return T + H - (y - ymin) / (ymax - ymin) * H; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
        "height=\"400\" font-family=\"monospace\" font-size=\"12\">\n";
  os << "<text x=\"" << L << "\" y=\"24\">" << metric << " vs vc_depth</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T + H << "\" x2=\"" << L + W
     << "\" y2=\"" << T + H << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
     << T + H << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << T + H + 16 << "\">" << num(xmin)
     << "</text>\n";
  os << "<text x=\"" << L + W - 20 << "\" y=\"" << T + H + 16 << "\">"
     << num(xmax) << "</text>\n";
  os << "<text x=\"4\" y=\"" << T + H << "\">" << num(ymin) << "</text>\n";
  os << "<text x=\"4\" y=\"" << T + 10 << "\">" << num(ymax) << "</text>\n";

  size_t si = 0;
  for (auto& [key, pts] : series) {
    const char* color = palette[si % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i)
      os << (i ? " " : "") << num(px(pts[i].first)) << ","
         << num(py(pts[i].second));
    os << "\"/>\n";
    for (auto [d, v] : pts)
      os << "<circle cx=\"" << num(px(d)) << "\" cy=\"" << num(py(v))
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << L + W + 12 << "\" y=\"" << T + 14 + 18 * double(si)
       << "\" fill=\"" << color << "\">"
       << name(Version(std::get<0>(key))) << "/" << std::get<1>(key) << "sw/w"
       << std::get<2>(key) << "</text>\n";
    ++si;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace noc
