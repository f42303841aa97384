#include "velopir/boot/backend.hpp"

namespace velopir::boot {

std::uint64_t GateCounts::total() const {
  std::uint64_t t = 0;
  for (std::size_t k = 0; k < by_kind.size(); ++k)
    if (static_cast<GateKind>(k) != GateKind::not_) t += by_kind[k];
  return t;
}

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::and_: return "and";
    case GateKind::or_: return "or";
    case GateKind::xor_: return "xor";
    case GateKind::xnor: return "xnor";
    case GateKind::mux: return "mux";
    case GateKind::not_: return "not";
    default: return "?";
  }
}

GateCounts PlainOracle::counts() const {
  GateCounts c;
  for (std::size_t k = 0; k < c.by_kind.size(); ++k) c.by_kind[k] = counters_[k].load(std::memory_order_relaxed);
  return c;
}

void PlainOracle::reset() {
  for (auto& c : counters_) c.store(0, std::memory_order_relaxed);
  max_depth_.store(0, std::memory_order_relaxed);
}

}  // namespace velopir::boot
