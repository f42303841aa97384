#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <concepts>
#include <cstdint>

#include "velopir/boot/gates.hpp"

namespace velopir::boot {

/// Gate set the circuits are written against. Implementations must allow
/// concurrent calls on distinct operands.
template <class B>
concept GateBackend = requires(const B& b, const typename B::Bit& x) {
  typename B::Bit;
  { b.and_(x, x) } -> std::same_as<typename B::Bit>;
  { b.or_(x, x) } -> std::same_as<typename B::Bit>;
  { b.xor_(x, x) } -> std::same_as<typename B::Bit>;
  { b.xnor(x, x) } -> std::same_as<typename B::Bit>;
  { b.not_(x) } -> std::same_as<typename B::Bit>;
  { b.mux(x, x, x) } -> std::same_as<typename B::Bit>;
  { b.constant(true) } -> std::same_as<typename B::Bit>;
};

enum class MuxMode { native, composed };

/// Gates on TLWE samples under a shared evaluation key.
class TfheBackend {
 public:
  using Bit = TlweSample;

  explicit TfheBackend(EvaluationKeySet evk, MuxMode mux = MuxMode::native)
      : evk_(std::move(evk)), mux_(mux) {}

  const EvaluationKeySet& evk() const { return evk_; }

  Bit and_(const Bit& a, const Bit& b) const { return hom_and(a, b, evk_); }
  Bit or_(const Bit& a, const Bit& b) const { return hom_or(a, b, evk_); }
  Bit xor_(const Bit& a, const Bit& b) const { return hom_xor(a, b, evk_); }
  Bit xnor(const Bit& a, const Bit& b) const { return hom_xnor(a, b, evk_); }
  Bit not_(const Bit& a) const { return hom_not(a); }
  /// c ? a : b
  Bit mux(const Bit& c, const Bit& a, const Bit& b) const {
    return mux_ == MuxMode::native ? hom_mux(c, a, b, evk_) : hom_mux_composed(c, a, b, evk_);
  }
  Bit constant(bool v) const { return hom_constant(v, evk_); }

 private:
  EvaluationKeySet evk_;
  MuxMode mux_;
};

enum class GateKind : std::size_t { and_, or_, xor_, xnor, mux, not_, count };

struct GateCounts {
  std::array<std::uint64_t, static_cast<std::size_t>(GateKind::count)> by_kind{};

  std::uint64_t operator[](GateKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
  /// Bootstrapped gates only; NOT is linear and excluded.
  std::uint64_t total() const;
  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

const char* gate_name(GateKind k);

/// Cleartext bit with the length of the longest gate chain that produced it.
struct PlainBit {
  bool value = false;
  std::uint32_t depth = 0;
};

/// Cleartext backend: exact boolean gates that count invocations per kind
/// and track dataflow depth. Constants have depth 0 and NOT does not add a
/// level. Counters are atomic, so one oracle can serve a parallel circuit.
class PlainOracle {
 public:
  using Bit = PlainBit;

  PlainOracle() = default;
  PlainOracle(const PlainOracle&) = delete;
  PlainOracle& operator=(const PlainOracle&) = delete;

  Bit and_(const Bit& a, const Bit& b) const { return gate(GateKind::and_, a.value && b.value, a, b); }
  Bit or_(const Bit& a, const Bit& b) const { return gate(GateKind::or_, a.value || b.value, a, b); }
  Bit xor_(const Bit& a, const Bit& b) const { return gate(GateKind::xor_, a.value != b.value, a, b); }
  Bit xnor(const Bit& a, const Bit& b) const { return gate(GateKind::xnor, a.value == b.value, a, b); }
  Bit not_(const Bit& a) const {
    bump(GateKind::not_);
    return Bit{!a.value, a.depth};
  }
  Bit mux(const Bit& c, const Bit& a, const Bit& b) const {
    return gate(GateKind::mux, c.value ? a.value : b.value, c, a, b);
  }
  Bit constant(bool v) const { return Bit{v, 0}; }

  GateCounts counts() const;
  std::uint32_t max_depth() const { return max_depth_.load(std::memory_order_relaxed); }
  void reset();

 private:
  void bump(GateKind k) const { counters_[static_cast<std::size_t>(k)].fetch_add(1, std::memory_order_relaxed); }
  template <class... Bits>
  Bit gate(GateKind k, bool v, const Bits&... in) const {
    bump(k);
    std::uint32_t d = 0;
    ((d = std::max(d, in.depth)), ...);
    ++d;
    std::uint32_t seen = max_depth_.load(std::memory_order_relaxed);
    while (seen < d && !max_depth_.compare_exchange_weak(seen, d, std::memory_order_relaxed)) {
    }
    return Bit{v, d};
  }

  mutable std::array<std::atomic<std::uint64_t>, static_cast<std::size_t>(GateKind::count)> counters_{};
  mutable std::atomic<std::uint32_t> max_depth_{0};
};

static_assert(GateBackend<TfheBackend>);
static_assert(GateBackend<PlainOracle>);

}  // namespace velopir::boot
