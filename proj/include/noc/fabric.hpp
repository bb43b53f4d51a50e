#pragma once
// switch-level building blocks: virtual channels with wormhole ownership, the
// round robin arbitration unit, the tdm crossbar switch and the network
// adapter ingress pipeline.

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "noc/codec.hpp"

namespace noc {

// hard protocol violations abort the run
struct SimFault : std::runtime_error {
  explicit SimFault(const std::string& what) : std::runtime_error(what) {}
};

enum class VcState { Idle, Busy, Empty, Ready };
const char* name(VcState s);

class NetworkAdapter;

// emission / grant / landing callbacks, implemented by the engine for latency
// bookkeeping and the event log. cycle is the base clock; phase is the fast
// sub-cycle of the emitting adapter.
struct FabricObserver {
  virtual ~FabricObserver() = default;
  virtual void on_emit(unsigned source, const Flit&, uint64_t cycle,
                       unsigned phase, uint64_t fast_tick) = 0;
  virtual void on_grant(unsigned switch_id, const Flit&, uint64_t cycle,
                        unsigned output) = 0;
  virtual void on_land(unsigned switch_id, const Flit&, uint64_t cycle,
                       unsigned vc_id) = 0;
};

// bounded flit fifo. a packet owns the channel from its header push until its
// tail pop; Whole units bypass ownership, turning the vc into a plain bounded
// packet queue (v1 output fifos, p2p links).
class VirtualChannel {
 public:
  VirtualChannel(unsigned width_bits, unsigned depth);

  VcState state() const;
  bool empty() const { return buf_.empty(); }
  bool full() const { return buf_.size() >= depth_; }
  std::size_t size() const { return buf_.size(); }
  unsigned depth() const { return depth_; }
  unsigned width_bits() const { return width_bits_; }
  std::optional<uint64_t> owner() const { return owner_; }
  unsigned max_occupancy() const { return max_occ_; }

  bool can_push(const Flit& f) const;
  void push(const Flit& f);  // SimFault on overflow or wormhole violation
  Flit pop();                // SimFault on underflow; tail pop releases the channel
  const Flit* peek() const;

 private:
  unsigned width_bits_;
  unsigned depth_;
  std::deque<Flit> buf_;
  std::optional<uint64_t> owner_;
  unsigned max_occ_ = 0;
};

// scan requests cyclically starting at pointer; first requester wins
std::optional<unsigned> rra_scan(const std::vector<bool>& requests,
                                 unsigned pointer);

class RoundRobinArbiter {
 public:
  explicit RoundRobinArbiter(unsigned n) : n_(n) {}
  // advances the pointer one past a grant; an empty request set leaves it alone
  std::optional<unsigned> grant(const std::vector<bool>& requests);
  unsigned pointer() const { return ptr_; }

 private:
  unsigned n_;
  unsigned ptr_ = 0;
};

struct NaJob {
  uint64_t pid = 0;
  Header header;
  std::vector<bool> payload;
};

// ingress pipeline in front of each storage module: type lookup (one slow
// cycle), header/tail packing (one slow cycle), the decoupling fifo, then the
// serializer which runs flit_count fast ticks per base cycle for the packet it
// is cutting. in Whole mode the serializer degenerates to a one-packet offer
// latch that the switch pulls from.
class NetworkAdapter {
 public:
  enum class Mode { Flit, Whole };

  NetworkAdapter(unsigned source, Mode mode, FlitWidth width, unsigned whole_bits,
                 unsigned fifo_depth, std::vector<unsigned> input_vc_ids);

  void enqueue(NaJob j);
  void step(uint64_t cycle, std::vector<VirtualChannel>& vcs, FabricObserver* obs);

  const Flit* offer() const { return offer_ ? &*offer_ : nullptr; }
  Flit take_offer();

  bool idle() const;
  unsigned source() const { return source_; }
  uint64_t fast_tick() const { return fast_tick_; }
  uint64_t stall_phases() const { return stall_phases_; }
  std::size_t backlog() const { return queue_.size(); }

 private:
  struct Packed {
    uint64_t pid;
    Packet packet;
  };
  struct Active {
    uint64_t pid;
    std::vector<Flit> flits;
    std::size_t next = 0;
    int vc = -1;
  };

  unsigned source_;
  Mode mode_;
  FlitWidth width_;
  unsigned whole_bits_;
  unsigned fifo_depth_;
  std::vector<unsigned> vc_ids_;

  std::deque<NaJob> queue_;
  std::optional<NaJob> type_reg_, pack_reg_;
  std::deque<Packed> fifo_;
  std::optional<Active> ser_;
  std::optional<Flit> offer_;

  uint64_t fast_tick_ = 0;
  uint64_t stall_phases_ = 0;
};

// one tdm crossbar: every cycle at most one flit crosses, selected by the
// arbitration unit (per-output round robin over the input slots, with a
// rotating output pick when several outputs could be served). a one-cycle
// crossing register sits between the input side and the output fifos.
class Switch {
 public:
  struct Slot {
    unsigned source;
    int input_vc;  // global vc index, or -1 to pull from the adapter offer latch
  };

  Switch(unsigned id, std::vector<Slot> slots, unsigned n_outputs,
         std::vector<std::vector<unsigned>> out_vc_ids, unsigned whole_data_bits);

  void step(uint64_t cycle, std::vector<VirtualChannel>& input_vcs,
            std::vector<NetworkAdapter>& nas,
            std::vector<VirtualChannel>& output_vcs, FabricObserver* obs);

  bool busy() const { return reg_.full || !ccn_.empty(); }
  unsigned id() const { return id_; }
  uint64_t stall_cycles() const { return stall_cycles_; }

  void enable_grant_log() { log_grants_ = true; }
  // (output, slot) per grant, in grant order
  const std::vector<std::pair<unsigned, unsigned>>& grant_log() const {
    return grant_log_;
  }

 private:
  const Flit* peek(const Slot& s, const std::vector<VirtualChannel>& input_vcs,
                   const std::vector<NetworkAdapter>& nas) const;
  unsigned dest_port(const Flit& f) const;

  unsigned id_;
  std::vector<Slot> slots_;
  unsigned n_outputs_;
  std::vector<std::vector<unsigned>> out_vcs_;
  unsigned whole_data_bits_;

  std::unordered_map<uint64_t, unsigned> ccn_;  // packet id -> output vc id
  std::vector<RoundRobinArbiter> au_;           // per output, over slots
  RoundRobinArbiter out_sel_;

  struct {
    Flit flit;
    unsigned vc = 0;
    bool full = false;
  } reg_;

  uint64_t stall_cycles_ = 0;
  bool log_grants_ = false;
  std::vector<std::pair<unsigned, unsigned>> grant_log_;
};

}  // namespace noc
