#include "velopir/engine/engine.hpp"

#include <algorithm>
#include <cctype>

namespace velopir::engine {

const char* level_name(OptLevel level) {
  switch (level) {
    case OptLevel::none: return "none";
    case OptLevel::outermost: return "outermost";
    case OptLevel::outer_mid: return "outer_mid";
    case OptLevel::all: return "all";
  }
  return "?";
}

OptLevel parse_level(std::string_view s) {
  std::string v(s);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "none" || v == "baseline") return OptLevel::none;
  if (v == "outermost" || v == "outer") return OptLevel::outermost;
  if (v == "outer_mid" || v == "outer+mid" || v == "mid") return OptLevel::outer_mid;
  if (v == "all") return OptLevel::all;
  throw std::invalid_argument("unknown optimization level: " + std::string(s));
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::large_scale: return "Large-Scale";
    case Stage::hom_sum: return "HomSum";
    case Stage::bitwise_and: return "HomBitwiseAND";
    case Stage::intv: return "IntV";
    case Stage::cov: return "CoV";
    case Stage::idm: return "IdM";
    case Stage::comparator: return "HomCompLE/HomCompL";
    case Stage::hom_eq: return "HomEQ";
  }
  return "?";
}

std::uint64_t theoretical_units(const SessionMeta& meta, Stage stage) {
  switch (stage) {
    case Stage::large_scale: return meta.M;
    case Stage::hom_sum: return std::uint64_t{meta.M} * meta.l_S / 2;
    case Stage::bitwise_and: return meta.l_S;
    case Stage::intv: return 2 * std::uint64_t{meta.d};
    case Stage::cov: return meta.d;
    case Stage::idm: return 1;
    case Stage::comparator: return meta.l_I;
    case Stage::hom_eq: return meta.l_I;
  }
  return 0;
}

std::vector<bool> signed_bits(std::int64_t value, unsigned width) {
  if (width < 1 || width > 63 || value < data::signed_min(width) || value > data::signed_max(width))
    throw std::out_of_range(std::to_string(value) + " does not fit a signed " + std::to_string(width) + "-bit word");
  std::vector<bool> bits(width);
  const auto u = static_cast<std::uint64_t>(value);
  for (unsigned i = 0; i < width; ++i) bits[i] = (u >> i) & 1;
  return bits;
}

std::vector<bool> unsigned_bits(std::uint64_t value, unsigned width) {
  if (width < 1 || width > 63 || value >= (std::uint64_t{1} << width))
    throw std::out_of_range(std::to_string(value) + " does not fit an unsigned " + std::to_string(width) + "-bit word");
  std::vector<bool> bits(width);
  for (unsigned i = 0; i < width; ++i) bits[i] = (value >> i) & 1;
  return bits;
}

std::int64_t signed_value(const std::vector<bool>& bits) {
  std::int64_t v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) v |= std::int64_t{1} << i;
  if (!bits.empty() && bits.back()) v -= std::int64_t{1} << bits.size();
  return v;
}

std::vector<std::vector<bool>> location_bits(const data::Record& r, const SessionMeta& meta) {
  const unsigned l = meta.l_I;
  switch (meta.mode) {
    case Mode::interval: {
      const auto& b = std::get<data::Interval>(r.location);
      return {signed_bits(b.x_left, l), signed_bits(b.x_right, l), signed_bits(b.y_left, l), signed_bits(b.y_right, l)};
    }
    case Mode::coordinate: {
      const auto& p = std::get<data::Coordinate>(r.location);
      return {signed_bits(p.x, l), signed_bits(p.y, l)};
    }
    case Mode::identifier:
      return {unsigned_bits(std::get<data::Identifier>(r.location).index, l)};
  }
  throw std::invalid_argument("unknown mode");
}

std::vector<std::vector<bool>> query_bits(const data::PlainQuery& q, const SessionMeta& meta) {
  if (q.mode != meta.mode) throw std::invalid_argument("query mode does not match the session");
  if (q.mode == Mode::identifier) return {unsigned_bits(q.index, meta.l_I)};
  return {signed_bits(q.x, meta.l_I), signed_bits(q.y, meta.l_I)};
}

std::size_t query_words(Mode mode) { return mode == Mode::identifier ? 1 : 2; }

EncryptedDatabase<boot::PlainOracle> plain_database(const data::PlainDatabase& db) {
  return encode_database<boot::PlainOracle>(db, plain_bit);
}

EncryptedQuery<boot::PlainOracle> plain_query(const data::PlainQuery& q, const SessionMeta& meta) {
  return encode_query<boot::PlainOracle>(q, meta, plain_bit);
}

data::ServiceWord plain_value(const Word<boot::PlainOracle>& w) {
  return decode_word(w, [](const boot::PlainBit& b) { return b.value; });
}

}  // namespace velopir::engine
