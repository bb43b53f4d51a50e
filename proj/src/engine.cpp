#include "noc/engine.hpp"

#include <ostream>

namespace noc {

Engine::Engine(const NetworkSpec& spec, const DataKindTable& kinds)
    : model_(build(spec)),
      kinds_(kinds),
      p2p_staging_(spec.n_sources),
      reassembly_(model_.output_vcs.size()) {}

static uint8_t il_of(const DataKindTable& kinds, unsigned kind) {
  const DataKind* k = kinds.find(kind);
  return k ? uint8_t(k->int_length) : 0;
}

void Engine::inject(uint64_t time, unsigned source, unsigned port, uint8_t kind,
                    std::vector<bool> payload) {
  if (time < cycle_)
    throw std::invalid_argument("cannot inject at past cycle " +
                                std::to_string(time) + " (now " +
                                std::to_string(cycle_) + ")");
  if (source >= model_.spec.n_sources)
    throw std::invalid_argument("unknown source " + std::to_string(source));
  if (port >= model_.spec.n_outputs)
    throw std::invalid_argument("unknown output port " + std::to_string(port));
  if (kind > 7)
    throw std::invalid_argument("data kind id " + std::to_string(kind) +
                                " does not fit the 3-bit header field");
  if (il_of(kinds_, kind) > 7)
    throw std::invalid_argument("int_length of kind " + std::to_string(kind) +
                                " does not fit the 3-bit header field");
  if (payload.empty()) throw std::invalid_argument("empty payload");
  PacketRecord r;
  r.id = records_.size();
  r.inject_cycle = time;
  r.source = source;
  r.port = port;
  r.kind = kind;
  r.payload = std::move(payload);
  pending_[time].push_back(r.id);
  records_.push_back(std::move(r));
}

void Engine::load(const TrafficTrace& trace) {
  for (const TraceMessage& m : trace.messages)
    inject(m.time, m.source, m.port, m.kind, m.payload);
}

bool Engine::drained() const {
  return pending_.empty() && delivered_ == records_.size();
}

void Engine::step() {
  try {
    stage_arrivals();
    sink_outputs();
    for (auto& sw : model_.switches)
      sw.step(cycle_, model_.input_vcs, model_.nas, model_.output_vcs, this);
    if (model_.spec.version == Version::P2P) p2p_transfer();
    for (auto& na : model_.nas) na.step(cycle_, model_.input_vcs, this);
  } catch (const SimFault& e) {
    throw SimFault("cycle " + std::to_string(cycle_) + ": " + e.what());
  }
  ++cycle_;
}

void Engine::run(const RunOptions& opts) {
  if (opts.event_log) {
    log_ = opts.event_log;
    *log_ << "cycle,component,event,packet_id,flit_kind\n";
  }
  constexpr uint64_t kStallWindow = 10000;
  while (true) {
    if (opts.horizon && cycle_ >= opts.horizon) break;
    if (opts.drain && drained()) break;
    if (!opts.horizon && !opts.drain) break;
    step();
    if (opts.drain && !opts.horizon && pending_.empty() &&
        delivered_ < records_.size() && cycle_ - last_activity_ > kStallWindow)
      throw SimFault("no forward progress for " + std::to_string(kStallWindow) +
                     " cycles with " + std::to_string(undrained()) +
                     " packets in flight");
  }
  log_ = nullptr;
}

void Engine::stage_arrivals() {
  while (!pending_.empty() && pending_.begin()->first <= cycle_) {
    for (uint64_t id : pending_.begin()->second) {
      PacketRecord& r = records_[id];
      if (model_.spec.version == Version::P2P) {
        p2p_staging_[r.source].push_back(id);
      } else {
        model_.nas[r.source].enqueue(
            {id, Header{uint8_t(r.kind), uint8_t(r.port), il_of(kinds_, r.kind)},
             r.payload});
      }
      last_activity_ = cycle_;
    }
    pending_.erase(pending_.begin());
  }
}

static Header expected_header(const DataKindTable& kinds,
                              const PacketRecord& r) {
  return Header{uint8_t(r.kind), uint8_t(r.port), il_of(kinds, r.kind)};
}

void Engine::sink_outputs() {
  const NetworkSpec& spec = model_.spec;
  for (unsigned o = 0; o < spec.n_outputs; ++o) {
    if (spec.version == Version::P2P) {
      std::vector<bool> req(spec.n_sources);
      for (unsigned s = 0; s < spec.n_sources; ++s)
        req[s] = !model_.p2p[s * spec.n_outputs + o].empty();
      auto g = model_.sink_rr[o].grant(req);
      if (!g) continue;
      Flit f = model_.p2p[*g * spec.n_outputs + o].pop();
      log_event("out", o, "deliver", f);
      deliver_whole(o, f);
    } else {
      std::vector<bool> req{!model_.output_vcs[2 * o].empty(),
                            !model_.output_vcs[2 * o + 1].empty()};
      auto g = model_.sink_rr[o].grant(req);
      if (!g) continue;
      deliver_wormhole(o, 2 * o + *g);
    }
    last_activity_ = cycle_;
  }
}

void Engine::deliver_wormhole(unsigned output, unsigned vc_id) {
  Flit f = model_.output_vcs[vc_id].pop();
  log_event("out", output, "deliver", f);
  if (f.kind == FlitKind::Whole) {
    deliver_whole(output, f);
    return;
  }
  PacketRecord& r = records_[f.packet_id];
  if (r.port != output)
    throw SimFault("packet " + std::to_string(f.packet_id) +
                   " surfaced at out" + std::to_string(output) +
                   " but was addressed to out" + std::to_string(r.port));
  ++r.flits_delivered;
  ++wire_units_;
  auto& buf = reassembly_[vc_id];
  if (f.kind == FlitKind::Header) {
    if (!buf.empty())
      throw SimFault("header of packet " + std::to_string(f.packet_id) +
                     " arrived mid-reassembly");
    r.header_deliver = cycle_;
  }
  buf.push_back(f);
  if (f.kind != FlitKind::Tail) return;

  Packet p;
  try {
    p = deflitize(buf, model_.spec.flit_width, unsigned(r.payload.size()));
  } catch (const CodecError& e) {
    throw SimFault("sink reassembly of packet " + std::to_string(f.packet_id) +
                   " failed: " + e.what());
  }
  if (!(p.header == expected_header(kinds_, r)) || p.payload != r.payload)
    throw SimFault("sink payload mismatch for packet " +
                   std::to_string(f.packet_id));
  buf.clear();
  if (r.tail_deliver)
    throw SimFault("duplicate delivery of packet " + std::to_string(f.packet_id));
  r.tail_deliver = cycle_;
  ++delivered_;
  payload_bits_ += r.payload.size();
}

void Engine::deliver_whole(unsigned output, const Flit& f) {
  PacketRecord& r = records_[f.packet_id];
  if (r.port != output)
    throw SimFault("packet " + std::to_string(f.packet_id) +
                   " surfaced at out" + std::to_string(output) +
                   " but was addressed to out" + std::to_string(r.port));
  if (r.tail_deliver)
    throw SimFault("duplicate delivery of packet " + std::to_string(f.packet_id));
  if (model_.spec.version == Version::V1) {
    unsigned data_bits = model_.spec.v1_packet_bits - 8;
    uint64_t expect =
        uint64_t(encode_header(expected_header(kinds_, r))) << data_bits |
        bits_to_word(r.payload);
    if (f.word != expect)
      throw SimFault("sink word mismatch for packet " +
                     std::to_string(f.packet_id));
  }
  r.header_deliver = r.tail_deliver = cycle_;
  r.flits_delivered = 1;
  ++wire_units_;
  ++delivered_;
  payload_bits_ += r.payload.size();
}

void Engine::p2p_transfer() {
  const NetworkSpec& spec = model_.spec;
  for (unsigned s = 0; s < spec.n_sources; ++s) {
    auto& staged = p2p_staging_[s];
    if (staged.empty()) continue;
    PacketRecord& r = records_[staged.front()];
    VirtualChannel& q = model_.p2p[s * spec.n_outputs + r.port];
    Flit f{FlitKind::Whole, r.id, r.id};
    if (!q.can_push(f)) continue;  // dedicated link backpressured
    q.push(f);
    r.header_emit = r.tail_emit = cycle_;
    ++r.flits_emitted;
    log_event("src", s, "transfer", f);
    staged.pop_front();
    last_activity_ = cycle_;
  }
}

void Engine::on_emit(unsigned source, const Flit& f, uint64_t cycle,
                     unsigned phase, uint64_t fast_tick) {
  (void)phase;
  PacketRecord& r = records_[f.packet_id];
  if (f.kind == FlitKind::Header || f.kind == FlitKind::Whole) {
    r.header_emit = cycle;
    r.header_tick = fast_tick;
  }
  if (f.kind == FlitKind::Tail || f.kind == FlitKind::Whole) {
    r.tail_emit = cycle;
    r.tail_tick = fast_tick;
  }
  ++r.flits_emitted;
  log_event("na", source, "emit", f);
  last_activity_ = cycle;
}

void Engine::on_grant(unsigned switch_id, const Flit& f, uint64_t cycle,
                      unsigned output) {
  (void)output;
  log_event("sw", switch_id, "grant", f);
  last_activity_ = cycle;
}

void Engine::on_land(unsigned switch_id, const Flit& f, uint64_t cycle,
                     unsigned vc_id) {
  (void)vc_id;
  log_event("sw", switch_id, "land", f);
  last_activity_ = cycle;
}

void Engine::log_event(const char* component, unsigned index, const char* event,
                       const Flit& f) {
  if (!log_) return;
  *log_ << cycle_ << ',' << component << index << ',' << event << ','
        << f.packet_id << ',' << flit_letter(f.kind) << '\n';
}

}  // namespace noc
