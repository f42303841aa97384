#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "velopir/circuits/circuits.hpp"
#include "velopir/data/dataset.hpp"

namespace velopir::engine {

using boot::GateBackend;
using circuits::Executor;
using circuits::Word;
using data::Mode;
using data::SessionMeta;

/// Cumulative optimization levels.
enum class OptLevel : std::uint32_t { none = 0, outermost = 1, outer_mid = 2, all = 3 };
inline constexpr std::array<OptLevel, 4> kAllLevels = {OptLevel::none, OptLevel::outermost,
                                                       OptLevel::outer_mid, OptLevel::all};

const char* level_name(OptLevel level);
/// "none", "outermost", "outer_mid" (or "outer+mid") or "all"; throws std::invalid_argument.
OptLevel parse_level(std::string_view s);

struct OptimizationConfig {
  OptLevel level = OptLevel::none;
  std::size_t n_p = 1;
};

/// Stages of the parallel resource table.
enum class Stage { large_scale, hom_sum, bitwise_and, intv, cov, idm, comparator, hom_eq };
inline constexpr std::array<Stage, 8> kAllStages = {Stage::large_scale, Stage::hom_sum,  Stage::bitwise_and,
                                                    Stage::intv,        Stage::cov,      Stage::idm,
                                                    Stage::comparator,  Stage::hom_eq};
const char* stage_name(Stage s);

/// Largest useful worker count for a stage: M, floor(M*l_S/2), l_S, 2d, d, 1,
/// l_I, l_I.
std::uint64_t theoretical_units(const SessionMeta& meta, Stage stage);

/// Two's-complement bits, LSB first. Throws std::out_of_range unless value
/// fits the signed width.
std::vector<bool> signed_bits(std::int64_t value, unsigned width);
/// Plain binary bits, LSB first. Throws std::out_of_range unless value < 2^width.
std::vector<bool> unsigned_bits(std::uint64_t value, unsigned width);
std::int64_t signed_value(const std::vector<bool>& bits);

/// Location words of a record in wire order: x_left, x_right, y_left,
/// y_right; x, y; or the identifier.
std::vector<std::vector<bool>> location_bits(const data::Record& r, const SessionMeta& meta);
/// Query words: x, y; or the identifier.
std::vector<std::vector<bool>> query_bits(const data::PlainQuery& q, const SessionMeta& meta);
std::size_t query_words(Mode mode);

template <GateBackend B>
struct EncryptedLocationEntry {
  Mode mode = Mode::interval;
  std::vector<Word<B>> words;
};

template <GateBackend B>
struct EncryptedRecord {
  EncryptedLocationEntry<B> location;
  Word<B> service;
};

template <GateBackend B>
struct EncryptedDatabase {
  SessionMeta meta;
  std::vector<EncryptedRecord<B>> records;

  /// Throws std::invalid_argument on any shape disagreement with meta.
  void validate() const {
    meta.validate();
    if (records.size() != meta.M) throw std::invalid_argument("encrypted database holds wrong record count");
    for (const auto& r : records) {
      if (r.location.mode != meta.mode) throw std::invalid_argument("encrypted record has the wrong mode");
      if (r.location.words.size() != meta.location_words())
        throw std::invalid_argument("encrypted record has the wrong number of location words");
      for (const auto& w : r.location.words)
        if (w.size() != meta.l_I) throw std::invalid_argument("location word width differs from l_I");
      if (r.service.size() != meta.l_S) throw std::invalid_argument("service word width differs from l_S");
    }
  }
};

template <GateBackend B>
struct EncryptedQuery {
  Mode mode = Mode::interval;
  std::vector<Word<B>> words;

  void validate(const SessionMeta& meta) const {
    if (mode != meta.mode) throw std::invalid_argument("query mode does not match the database");
    if (words.size() != query_words(mode)) throw std::invalid_argument("query has the wrong number of words");
    for (const auto& w : words)
      if (w.size() != meta.l_I) throw std::invalid_argument("query word width differs from l_I");
  }
};

/// Builds the encrypted form bit by bit; `bit(bool)` is called for each
/// record's location words then its service word, LSB first.
template <GateBackend B, class BitFn>
EncryptedDatabase<B> encode_database(const data::PlainDatabase& db, BitFn&& bit) {
  EncryptedDatabase<B> out;
  out.meta = db.meta;
  out.records.reserve(db.records.size());
  for (const auto& r : db.records) {
    EncryptedRecord<B> er;
    er.location.mode = db.meta.mode;
    for (const auto& w : location_bits(r, db.meta)) {
      Word<B> ew;
      ew.reserve(w.size());
      for (bool b : w) ew.push_back(bit(b));
      er.location.words.push_back(std::move(ew));
    }
    for (bool b : data::encode_service(r.service, db.meta.l_S)) er.service.push_back(bit(b));
    out.records.push_back(std::move(er));
  }
  return out;
}

template <GateBackend B, class BitFn>
EncryptedQuery<B> encode_query(const data::PlainQuery& q, const SessionMeta& meta, BitFn&& bit) {
  EncryptedQuery<B> out;
  out.mode = q.mode;
  for (const auto& w : query_bits(q, meta)) {
    Word<B> ew;
    ew.reserve(w.size());
    for (bool b : w) ew.push_back(bit(b));
    out.words.push_back(std::move(ew));
  }
  return out;
}

template <class Bit, class DecFn>
data::ServiceWord decode_word(const std::vector<Bit>& word, DecFn&& dec) {
  std::vector<bool> bits;
  bits.reserve(word.size());
  for (const auto& b : word) bits.push_back(dec(b));
  return data::decode_service(bits);
}

/// Plain helpers for the cleartext backend.
inline boot::PlainBit plain_bit(bool v) { return boot::PlainBit{v, 0}; }
EncryptedDatabase<boot::PlainOracle> plain_database(const data::PlainDatabase& db);
EncryptedQuery<boot::PlainOracle> plain_query(const data::PlainQuery& q, const SessionMeta& meta);
data::ServiceWord plain_value(const Word<boot::PlainOracle>& w);

/// Level plus the executor the stages draw workers from.
struct Schedule {
  OptLevel level = OptLevel::none;
  Executor ex;

  bool mid() const { return level >= OptLevel::outer_mid; }
  bool inner() const { return level == OptLevel::all; }
};

namespace detail {

template <GateBackend B>
typename B::Bit compare(const B& g, const Word<B>& x, const Word<B>& y, bool or_equal, const Schedule& s) {
  if (s.inner())
    return or_equal ? circuits::hom_comp_le_opt(g, x, y, s.ex) : circuits::hom_comp_l_opt(g, x, y, s.ex);
  return or_equal ? circuits::hom_comp_le(g, x, y) : circuits::hom_comp_l(g, x, y);
}

template <GateBackend B>
typename B::Bit equal(const B& g, const Word<B>& x, const Word<B>& y, const Schedule& s) {
  return s.inner() ? circuits::hom_eq_opt(g, x, y, s.ex) : circuits::hom_eq(g, x, y);
}

template <class F>
void run(const Schedule& s, bool parallel, std::size_t count, std::size_t units, F&& fn) {
  if (parallel)
    s.ex.run(count, fn, units);
  else
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

inline void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace detail

/// 1 iff x_left <= x < x_right and y_left <= y < y_right.
template <GateBackend B>
typename B::Bit intv(const B& g, const Word<B>& x, const Word<B>& y, const EncryptedLocationEntry<B>& loc,
                     const Schedule& s = {}) {
  detail::require(loc.mode == Mode::interval && loc.words.size() == 4, "intv: not an interval entry");
  for (const auto& w : loc.words) detail::require(w.size() == x.size() && w.size() == y.size(), "intv: width mismatch");
  std::array<typename B::Bit, 4> c;
  detail::run(s, s.mid(), 4, 4, [&](std::size_t i) {
    const Word<B>& p = i < 2 ? x : y;
    const Word<B>& bound = loc.words[i];
    // Even slots are left bounds (inclusive), odd slots right bounds (exclusive).
    c[i] = i % 2 == 0 ? detail::compare(g, bound, p, true, s) : detail::compare(g, p, bound, false, s);
  });
  std::array<typename B::Bit, 2> v;
  detail::run(s, s.mid(), 2, 2, [&](std::size_t i) { v[i] = g.and_(c[2 * i], c[2 * i + 1]); });
  return g.and_(v[0], v[1]);
}

/// 1 iff both coordinates match.
template <GateBackend B>
typename B::Bit cov(const B& g, const Word<B>& x, const Word<B>& y, const EncryptedLocationEntry<B>& loc,
                    const Schedule& s = {}) {
  detail::require(loc.mode == Mode::coordinate && loc.words.size() == 2, "cov: not a coordinate entry");
  for (const auto& w : loc.words) detail::require(w.size() == x.size() && w.size() == y.size(), "cov: width mismatch");
  std::array<typename B::Bit, 2> e;
  detail::run(s, s.mid(), 2, 2, [&](std::size_t i) { e[i] = detail::equal(g, i == 0 ? x : y, loc.words[i], s); });
  return g.and_(e[0], e[1]);
}

/// 1 iff the identifiers match; a single equality test.
template <GateBackend B>
typename B::Bit idm(const B& g, const Word<B>& id, const EncryptedLocationEntry<B>& loc, const Schedule& s = {}) {
  detail::require(loc.mode == Mode::identifier && loc.words.size() == 1, "idm: not an identifier entry");
  detail::require(loc.words[0].size() == id.size(), "idm: width mismatch");
  return detail::equal(g, id, loc.words[0], s);
}

template <GateBackend B>
typename B::Bit validate_entry(const B& g, const EncryptedQuery<B>& q, const EncryptedLocationEntry<B>& loc,
                               const Schedule& s = {}) {
  switch (q.mode) {
    case Mode::interval: return intv(g, q.words.at(0), q.words.at(1), loc, s);
    case Mode::coordinate: return cov(g, q.words.at(0), q.words.at(1), loc, s);
    case Mode::identifier: return idm(g, q.words.at(0), loc, s);
  }
  throw std::invalid_argument("unknown mode");
}

/// Validates every record against the query, masks each service word with
/// its own validation bit and XOR-folds the masked words. With disjoint
/// records the result is the matching service or zero.
template <GateBackend B>
Word<B> velopir_eval(const B& g, const EncryptedQuery<B>& q, const EncryptedDatabase<B>& db, const Schedule& s) {
  db.validate();
  q.validate(db.meta);
  const SessionMeta& m = db.meta;
  std::vector<Word<B>> masked(m.M);
  detail::run(s, s.level >= OptLevel::outermost, m.M, m.M, [&](std::size_t i) {
    const auto& rec = db.records[i];
    const auto v = validate_entry(g, q, rec.location, s);
    masked[i] = s.mid() ? circuits::hom_bitwise_and_opt(g, v, rec.service, s.ex)
                        : circuits::hom_bitwise_and(g, v, rec.service);
  });
  if (s.inner()) return circuits::hom_sum_opt(g, std::move(masked), m.l_S, s.ex);
  return circuits::hom_sum(g, masked, m.l_S);
}

/// Runs velopir_eval on a pool of cfg.n_p workers created for the call.
template <GateBackend B>
Word<B> velopir_eval(const B& g, const EncryptedQuery<B>& q, const EncryptedDatabase<B>& db,
                     const OptimizationConfig& cfg = {}) {
  if (cfg.n_p < 1) throw std::invalid_argument("n_p must be at least 1");
  if (cfg.level == OptLevel::none || cfg.n_p == 1) return velopir_eval(g, q, db, Schedule{cfg.level, Executor{}});
  circuits::WorkerPool pool(cfg.n_p);
  return velopir_eval(g, q, db, Schedule{cfg.level, Executor(&pool)});
}

}  // namespace velopir::engine
