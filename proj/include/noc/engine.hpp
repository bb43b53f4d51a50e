#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "noc/topology.hpp"
#include "noc/workload.hpp"

namespace noc {

// Full life cycle of one injected message. Emission times are base cycles at
// the adapter, ticks count the adapter's fast serializer clock, delivery
// times are base cycles at the sink.
struct PacketRecord {
  uint64_t id = 0;
  uint64_t inject_cycle = 0;
  unsigned source = 0;
  unsigned port = 0;
  uint8_t kind = 0;
  std::vector<bool> payload;

  std::optional<uint64_t> header_emit, tail_emit;
  std::optional<uint64_t> header_tick, tail_tick;
  std::optional<uint64_t> header_deliver, tail_deliver;
  unsigned flits_emitted = 0;
  unsigned flits_delivered = 0;

  bool complete() const { return tail_deliver.has_value(); }
  // cycles from injection to the tail reaching its output module
  uint64_t total_latency() const { return *tail_deliver - inject_cycle; }
  // base cycles a header spends between leaving the adapter and delivery
  uint64_t transit_latency() const { return *header_deliver - *header_emit; }
  // fast ticks the serializer spent on the packet
  uint64_t serialization_ticks() const { return *tail_tick - *header_tick + 1; }
};

struct RunOptions {
  uint64_t horizon = 0;           // hard cycle bound; 0 = unbounded
  bool drain = true;              // also stop once every injection is delivered
  std::ostream* event_log = nullptr;  // CSV flit-event stream when set
};

// Cycle-level simulation of one built network. Owns the model, stages trace
// injections, observes the fabric and reassembles packets at the sinks.
class Engine : public FabricObserver {
 public:
  explicit Engine(const NetworkSpec& spec,
                  const DataKindTable& kinds = auth_kinds());

  void load(const TrafficTrace& trace);
  void inject(uint64_t time, unsigned source, unsigned port, uint8_t kind,
              std::vector<bool> payload);

  void step();
  void run(const RunOptions& opts = {});

  uint64_t cycle() const { return cycle_; }
  bool drained() const;

  const std::vector<PacketRecord>& records() const { return records_; }
  uint64_t injected() const { return records_.size(); }
  uint64_t delivered() const { return delivered_; }
  uint64_t undrained() const { return records_.size() - delivered_; }
  uint64_t wire_units_delivered() const { return wire_units_; }
  uint64_t payload_bits_delivered() const { return payload_bits_; }

  NetworkModel& model() { return model_; }
  const NetworkModel& model() const { return model_; }

  // fabric observer
  void on_emit(unsigned source, const Flit& f, uint64_t cycle, unsigned phase,
               uint64_t fast_tick) override;
  void on_grant(unsigned switch_id, const Flit& f, uint64_t cycle,
                unsigned output) override;
  void on_land(unsigned switch_id, const Flit& f, uint64_t cycle,
               unsigned vc_id) override;

 private:
  void stage_arrivals();
  void sink_outputs();
  void p2p_transfer();
  void deliver_wormhole(unsigned output, unsigned vc_id);
  void deliver_whole(unsigned output, const Flit& f);
  void log_event(const char* component, unsigned index, const char* event,
                 const Flit& f);

  NetworkModel model_;
  DataKindTable kinds_;
  uint64_t cycle_ = 0;
  std::vector<PacketRecord> records_;
  std::map<uint64_t, std::vector<uint64_t>> pending_;  // cycle -> packet ids
  std::vector<std::deque<uint64_t>> p2p_staging_;      // per source
  std::vector<std::vector<Flit>> reassembly_;          // per output vc
  uint64_t delivered_ = 0;
  uint64_t wire_units_ = 0;
  uint64_t payload_bits_ = 0;
  uint64_t last_activity_ = 0;
  std::ostream* log_ = nullptr;
};

}  // namespace noc
