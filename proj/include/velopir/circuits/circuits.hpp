#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "velopir/boot/backend.hpp"
#include "velopir/circuits/worker_pool.hpp"

namespace velopir::circuits {

using boot::GateBackend;

/// Bit-sliced word over a backend; index 0 is the LSB.
template <GateBackend B>
using Word = std::vector<typename B::Bit>;

namespace detail {

inline void require_widths(std::size_t a, std::size_t b, std::size_t min, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": width mismatch " + std::to_string(a) +
                                " vs " + std::to_string(b));
  if (a < min)
    throw std::invalid_argument(std::string(what) + ": width must be at least " + std::to_string(min));
}

template <GateBackend B>
typename B::Bit comparator(const B& g, const Word<B>& x, const Word<B>& y, bool or_equal,
                           const Executor* ex) {
  using Bit = typename B::Bit;
  require_widths(x.size(), y.size(), 2, or_equal ? "hom_comp_le" : "hom_comp_l");
  const std::size_t l = x.size();
  const Bit t0 = g.xor_(x[l - 1], y[l - 1]);
  std::vector<Bit> t1(l - 1);
  auto xnor_at = [&](std::size_t i) { t1[i] = g.xnor(x[i], y[i]); };
  if (ex)
    ex->run(l - 1, xnor_at);
  else
    for (std::size_t i = 0; i + 1 < l; ++i) xnor_at(i);
  // t2 tracks the verdict on bits 0..i: equal bits keep it, otherwise
  // y[i] = 1 means x < y on the prefix.
  Bit t2 = g.constant(or_equal);
  for (std::size_t i = 0; i + 1 < l; ++i) t2 = g.mux(t1[i], t2, y[i]);
  // Differing signs: x <= y exactly when x is negative.
  return g.mux(t0, x[l - 1], t2);
}

}  // namespace detail

/// 1 iff x <= y as two's-complement integers. Width >= 2.
template <GateBackend B>
typename B::Bit hom_comp_le(const B& g, const Word<B>& x, const Word<B>& y) {
  return detail::comparator(g, x, y, true, nullptr);
}

/// 1 iff x < y as two's-complement integers. Width >= 2.
template <GateBackend B>
typename B::Bit hom_comp_l(const B& g, const Word<B>& x, const Word<B>& y) {
  return detail::comparator(g, x, y, false, nullptr);
}

/// hom_comp_le with the XNOR stage spread over the executor.
template <GateBackend B>
typename B::Bit hom_comp_le_opt(const B& g, const Word<B>& x, const Word<B>& y, const Executor& ex) {
  return detail::comparator(g, x, y, true, &ex);
}

template <GateBackend B>
typename B::Bit hom_comp_l_opt(const B& g, const Word<B>& x, const Word<B>& y, const Executor& ex) {
  return detail::comparator(g, x, y, false, &ex);
}

/// 1 iff every bit agrees. Runs l XNOR and l-1 AND gates in a chain.
template <GateBackend B>
typename B::Bit hom_eq(const B& g, const Word<B>& x, const Word<B>& y) {
  detail::require_widths(x.size(), y.size(), 1, "hom_eq");
  typename B::Bit r = g.xnor(x[0], y[0]);
  for (std::size_t i = 1; i < x.size(); ++i) r = g.and_(r, g.xnor(x[i], y[i]));
  return r;
}

/// hom_eq as concurrent XNORs followed by a pairwise AND tree of depth
/// ceil(log2 l). Same gate count as hom_eq.
template <GateBackend B>
typename B::Bit hom_eq_opt(const B& g, const Word<B>& x, const Word<B>& y, const Executor& ex) {
  detail::require_widths(x.size(), y.size(), 1, "hom_eq_opt");
  const std::size_t l = x.size();
  std::vector<typename B::Bit> t(l);
  ex.run(l, [&](std::size_t i) { t[i] = g.xnor(x[i], y[i]); });
  for (std::size_t k = 1; k < l; k *= 2) {
    const std::size_t pairs = (l - k + 2 * k - 1) / (2 * k);
    ex.run(pairs, [&](std::size_t p) {
      const std::size_t i = p * 2 * k;
      if (i + k < l) t[i] = g.and_(t[i], t[i + k]);
    });
  }
  return t[0];
}

/// v ? s : 0, one AND per bit.
template <GateBackend B>
Word<B> hom_bitwise_and(const B& g, const typename B::Bit& v, const Word<B>& s) {
  Word<B> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = g.and_(v, s[i]);
  return out;
}

template <GateBackend B>
Word<B> hom_bitwise_and_opt(const B& g, const typename B::Bit& v, const Word<B>& s, const Executor& ex) {
  Word<B> out(s.size());
  ex.run(s.size(), [&](std::size_t i) { out[i] = g.and_(v, s[i]); });
  return out;
}

/// Bitwise XOR of all items: (M-1) * width XOR gates. An empty list gives
/// `width` trivial zeros.
template <GateBackend B>
Word<B> hom_sum(const B& g, const std::vector<Word<B>>& items, std::size_t width) {
  if (items.empty()) return Word<B>(width, g.constant(false));
  for (const auto& it : items) detail::require_widths(it.size(), width, 0, "hom_sum");
  Word<B> s = items[0];
  for (std::size_t m = 1; m < items.size(); ++m)
    for (std::size_t j = 0; j < width; ++j) s[j] = g.xor_(s[j], items[m][j]);
  return s;
}

/// hom_sum as a reduction tree: round k XORs item i with item i+k for
/// i = 0, 2k, 4k, ...; unpaired items pass through. The tree depends only on
/// the item count, so results do not depend on the worker count.
template <GateBackend B>
Word<B> hom_sum_opt(const B& g, std::vector<Word<B>> items, std::size_t width, const Executor& ex) {
  if (items.empty()) return Word<B>(width, g.constant(false));
  for (const auto& it : items) detail::require_widths(it.size(), width, 0, "hom_sum_opt");
  const std::size_t m = items.size();
  for (std::size_t k = 1; k < m; k *= 2) {
    const std::size_t pairs = (m - k + 2 * k - 1) / (2 * k);
    ex.run(pairs * width, [&](std::size_t task) {
      const std::size_t i = (task / width) * 2 * k;
      const std::size_t j = task % width;
      if (i + k < m) items[i][j] = g.xor_(items[i][j], items[i + k][j]);
    });
  }
  return std::move(items[0]);
}

}  // namespace velopir::circuits
