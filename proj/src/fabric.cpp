#include "noc/fabric.hpp"

namespace noc {

const char* name(VcState s) {
  switch (s) {
    case VcState::Idle: return "idle";
    case VcState::Busy: return "busy";
    case VcState::Empty: return "empty";
    case VcState::Ready: return "ready";
  }
  return "?";
}

VirtualChannel::VirtualChannel(unsigned width_bits, unsigned depth)
    : width_bits_(width_bits), depth_(depth) {
  if (depth_ == 0) throw SimFault("vc depth must be positive");
}

VcState VirtualChannel::state() const {
  if (full()) return VcState::Busy;
  if (buf_.empty()) return owner_ ? VcState::Empty : VcState::Idle;
  return VcState::Ready;
}

bool VirtualChannel::can_push(const Flit& f) const {
  if (full()) return false;
  switch (f.kind) {
    case FlitKind::Whole:
      return !owner_;
    case FlitKind::Header:
      return state() == VcState::Idle;
    case FlitKind::Body:
    case FlitKind::Tail:
      return owner_ && *owner_ == f.packet_id;
  }
  return false;
}

void VirtualChannel::push(const Flit& f) {
  if (full())
    throw SimFault("push to a full vc (backpressure violated), packet " +
                   std::to_string(f.packet_id));
  if (f.kind == FlitKind::Whole) {
    if (owner_) throw SimFault("whole unit pushed into an owned vc");
  } else if (f.kind == FlitKind::Header) {
    if (state() != VcState::Idle)
      throw SimFault("header of packet " + std::to_string(f.packet_id) +
                     " pushed into a non-idle vc");
    owner_ = f.packet_id;
  } else {
    if (!owner_)
      throw SimFault("flit of packet " + std::to_string(f.packet_id) +
                     " pushed into an unallocated vc");
    if (*owner_ != f.packet_id)
      throw SimFault("wormhole violation: packet " + std::to_string(f.packet_id) +
                     " interleaved into a vc owned by " + std::to_string(*owner_));
  }
  buf_.push_back(f);
  if (buf_.size() > max_occ_) max_occ_ = unsigned(buf_.size());
}

Flit VirtualChannel::pop() {
  if (buf_.empty()) throw SimFault("pop from an empty vc");
  Flit f = buf_.front();
  buf_.pop_front();
  if (f.kind == FlitKind::Tail) {
    if (!owner_ || *owner_ != f.packet_id)
      throw SimFault("tail popped from a vc it does not own");
    owner_.reset();
  }
  return f;
}

const Flit* VirtualChannel::peek() const {
  return buf_.empty() ? nullptr : &buf_.front();
}

std::optional<unsigned> rra_scan(const std::vector<bool>& requests,
                                 unsigned pointer) {
  const unsigned n = unsigned(requests.size());
  for (unsigned k = 0; k < n; ++k) {
    unsigned i = (pointer + k) % n;
    if (requests[i]) return i;
  }
  return std::nullopt;
}

std::optional<unsigned> RoundRobinArbiter::grant(
    const std::vector<bool>& requests) {
  auto g = rra_scan(requests, ptr_);
  if (g) ptr_ = (*g + 1) % n_;
  return g;
}

// --- network adapter ---------------------------------------------------------

NetworkAdapter::NetworkAdapter(unsigned source, Mode mode, FlitWidth width,
                               unsigned whole_bits, unsigned fifo_depth,
                               std::vector<unsigned> input_vc_ids)
    : source_(source),
      mode_(mode),
      width_(width),
      whole_bits_(whole_bits),
      fifo_depth_(fifo_depth ? fifo_depth : 1),
      vc_ids_(std::move(input_vc_ids)) {}

void NetworkAdapter::enqueue(NaJob j) { queue_.push_back(std::move(j)); }

bool NetworkAdapter::idle() const {
  return queue_.empty() && !type_reg_ && !pack_reg_ && fifo_.empty() && !ser_ &&
         !offer_;
}

Flit NetworkAdapter::take_offer() {
  if (!offer_) throw SimFault("take_offer on an empty adapter latch");
  Flit f = *offer_;
  offer_.reset();
  return f;
}

void NetworkAdapter::step(uint64_t cycle, std::vector<VirtualChannel>& vcs,
                          FabricObserver* obs) {
  // front end: downstream-first moves would add a dead cycle in the fifo, and
  // the packing stage hands its result to the serializer late in the same slow
  // cycle, so run type->pack, then pack->fifo, then the intake.
  if (type_reg_ && !pack_reg_) {
    pack_reg_ = std::move(*type_reg_);
    type_reg_.reset();
  }
  if (pack_reg_ && fifo_.size() < fifo_depth_) {
    if (mode_ == Mode::Whole && pack_reg_->payload.size() > whole_bits_ - 8u)
      throw SimFault("payload of " + std::to_string(pack_reg_->payload.size()) +
                     " bits exceeds the " + std::to_string(whole_bits_ - 8) +
                     "-bit data field");
    fifo_.push_back({pack_reg_->pid, Packet{pack_reg_->header,
                                            std::move(pack_reg_->payload)}});
    pack_reg_.reset();
  }
  if (!queue_.empty() && !type_reg_) {
    type_reg_ = std::move(queue_.front());
    queue_.pop_front();
  }

  if (mode_ == Mode::Whole) {
    if (!offer_ && !fifo_.empty()) {
      Packed& p = fifo_.front();
      uint64_t word = uint64_t(encode_header(p.packet.header))
                          << (whole_bits_ - 8) |
                      bits_to_word(p.packet.payload);
      offer_ = Flit{FlitKind::Whole, word, p.pid};
      ++fast_tick_;
      if (obs) obs->on_emit(source_, *offer_, cycle, 0, fast_tick_);
      fifo_.pop_front();
    }
    return;
  }

  if (!ser_ && !fifo_.empty()) {
    Packed& p = fifo_.front();
    ser_ = Active{p.pid, flitize(p.packet, width_, p.pid)};
    fifo_.pop_front();
  }
  if (!ser_) return;

  // the packet under the knife sets the fast clock: flit_count ticks per base cycle
  const unsigned phases = unsigned(ser_->flits.size());
  for (unsigned p = 0; p < phases && ser_; ++p) {
    ++fast_tick_;
    const Flit& f = ser_->flits[ser_->next];
    if (f.kind == FlitKind::Header) {
      int pick = -1;
      for (unsigned id : vc_ids_)
        if (vcs[id].state() == VcState::Idle) {
          pick = int(id);
          break;
        }
      if (pick < 0) {
        ++stall_phases_;
        continue;
      }
      ser_->vc = pick;
    }
    VirtualChannel& vc = vcs[ser_->vc];
    if (vc.full()) {
      ++stall_phases_;
      continue;
    }
    vc.push(f);
    if (obs) obs->on_emit(source_, f, cycle, p, fast_tick_);
    if (++ser_->next == ser_->flits.size()) ser_.reset();
  }
}

// --- switch -------------------------------------------------------------------

Switch::Switch(unsigned id, std::vector<Slot> slots, unsigned n_outputs,
               std::vector<std::vector<unsigned>> out_vc_ids,
               unsigned whole_data_bits)
    : id_(id),
      slots_(std::move(slots)),
      n_outputs_(n_outputs),
      out_vcs_(std::move(out_vc_ids)),
      whole_data_bits_(whole_data_bits),
      au_(n_outputs, RoundRobinArbiter(unsigned(slots_.size()))),
      out_sel_(n_outputs) {}

const Flit* Switch::peek(const Slot& s,
                         const std::vector<VirtualChannel>& input_vcs,
                         const std::vector<NetworkAdapter>& nas) const {
  if (s.input_vc >= 0) return input_vcs[unsigned(s.input_vc)].peek();
  return nas[s.source].offer();
}

unsigned Switch::dest_port(const Flit& f) const {
  uint64_t hdr =
      f.kind == FlitKind::Whole ? (f.word >> whole_data_bits_) : f.word;
  return decode_header(hdr).port;
}

void Switch::step(uint64_t cycle, std::vector<VirtualChannel>& input_vcs,
                  std::vector<NetworkAdapter>& nas,
                  std::vector<VirtualChannel>& output_vcs,
                  FabricObserver* obs) {
  // the crossing register lands first; while it is blocked nothing else moves
  if (reg_.full) {
    VirtualChannel& vc = output_vcs[reg_.vc];
    if (!vc.can_push(reg_.flit)) {
      ++stall_cycles_;
      return;
    }
    vc.push(reg_.flit);
    if (obs) obs->on_land(id_, reg_.flit, cycle, reg_.vc);
    reg_.full = false;
  }

  // collect requests: a slot requests its head flit's output if the flit could
  // actually be accepted there this cycle
  const unsigned ns = unsigned(slots_.size());
  std::vector<int> target(ns, -1);
  std::vector<unsigned> port_of(ns, 0);
  std::vector<std::vector<bool>> req(n_outputs_, std::vector<bool>(ns, false));
  std::vector<bool> out_has(n_outputs_, false);
  bool any_head = false;

  for (unsigned i = 0; i < ns; ++i) {
    const Flit* head = peek(slots_[i], input_vcs, nas);
    if (!head) continue;
    any_head = true;
    unsigned port;
    int vc_id = -1;
    if (head->kind == FlitKind::Header || head->kind == FlitKind::Whole) {
      port = dest_port(*head);
      if (port >= n_outputs_)
        throw SimFault("packet " + std::to_string(head->packet_id) +
                       " addresses output " + std::to_string(port));
      for (unsigned cand : out_vcs_[port]) {
        const VirtualChannel& vc = output_vcs[cand];
        bool ok = head->kind == FlitKind::Header ? vc.state() == VcState::Idle
                                                 : vc.can_push(*head);
        if (ok) {
          vc_id = int(cand);
          break;
        }
      }
    } else {
      auto it = ccn_.find(head->packet_id);
      if (it == ccn_.end())
        throw SimFault("flit of packet " + std::to_string(head->packet_id) +
                       " has no route mapping through switch " +
                       std::to_string(id_));
      port = unsigned(std::distance(
          out_vcs_.begin(),
          std::find_if(out_vcs_.begin(), out_vcs_.end(), [&](const auto& v) {
            return std::find(v.begin(), v.end(), it->second) != v.end();
          })));
      if (!output_vcs[it->second].full()) vc_id = int(it->second);
    }
    if (vc_id >= 0) {
      target[i] = vc_id;
      port_of[i] = port;
      req[port][i] = true;
      out_has[port] = true;
    }
  }

  auto out = out_sel_.grant(out_has);
  if (!out) {
    if (any_head) ++stall_cycles_;
    return;
  }
  auto slot = au_[*out].grant(req[*out]);
  // out_has[*out] implies at least one requester
  Slot& s = slots_[*slot];
  Flit f = s.input_vc >= 0 ? input_vcs[unsigned(s.input_vc)].pop()
                           : nas[s.source].take_offer();

  if (f.kind == FlitKind::Header) {
    if (!ccn_.emplace(f.packet_id, unsigned(target[*slot])).second)
      throw SimFault("packet " + std::to_string(f.packet_id) +
                     " already mapped through switch " + std::to_string(id_));
  } else if (f.kind == FlitKind::Tail) {
    ccn_.erase(f.packet_id);
  }

  reg_.flit = f;
  reg_.vc = unsigned(target[*slot]);
  reg_.full = true;
  if (obs) obs->on_grant(id_, f, cycle, *out);
  if (log_grants_) grant_log_.emplace_back(*out, *slot);
}

}  // namespace noc
