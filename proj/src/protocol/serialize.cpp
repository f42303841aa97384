#include "velopir/protocol/serialize.hpp"

#include <string>

namespace velopir::protocol {

namespace {

void expect(const Section& s, SectionTag tag) {
  if (s.tag != tag)
    throw FormatError("expected section " + std::string(tag.begin(), tag.end()) + ", found " +
                      std::string(s.tag.begin(), s.tag.end()));
}

std::uint32_t checked_dimension(std::uint32_t dim, const char* what) {
  if (dim == 0) throw FormatError(std::string(what) + ": zero sample dimension");
  return dim;
}

std::size_t checked_count(std::uint64_t count, std::size_t words_left, std::uint32_t dim, const char* what) {
  if (count > words_left / (std::uint64_t{dim} + 1)) throw FormatError(std::string(what) + ": sample count exceeds payload");
  return static_cast<std::size_t>(count);
}

void write_samples(WordWriter& w, const std::vector<TlweSample>& v) {
  for (const auto& s : v) w.sample(s);
}

std::uint32_t dimension_of(const std::vector<TlweSample>& v) {
  return v.empty() ? 0 : static_cast<std::uint32_t>(v.front().dimension());
}

template <class F>
auto as_format(const char* what, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Section to_section(const SessionMeta& m) {
  WordWriter w;
  w.u32(m.M);
  w.u32(m.l_I);
  w.u32(m.l_S);
  w.u32(m.d);
  w.u32(static_cast<std::uint32_t>(m.mode));
  return Section{tags::kMeta, 0, w.take()};
}

SessionMeta meta_from_section(const Section& s) {
  expect(s, tags::kMeta);
  WordReader r(s.words);
  SessionMeta m;
  m.M = r.u32();
  m.l_I = r.u32();
  m.l_S = r.u32();
  m.d = r.u32();
  const std::uint32_t mode = r.u32();
  r.expect_done("META");
  if (mode > 2) throw FormatError("META: unknown mode " + std::to_string(mode));
  m.mode = static_cast<data::Mode>(mode);
  as_format("META", [&] {
    m.validate();
    return 0;
  });
  return m;
}

Section session_section(std::uint64_t id) {
  WordWriter w;
  w.u64(id);
  return Section{tags::kSession, 0, w.take()};
}

std::uint64_t session_from(const Container& c) {
  WordReader r(c.require(tags::kSession).words);
  const std::uint64_t id = r.u64();
  r.expect_done("SESS");
  return id;
}

Container to_container(const PublicKeyMaterial& pk) {
  Container c;
  c.add(to_section(pk.meta));
  WordWriter wi, ws;
  wi.u64(pk.pk_I.size());
  write_samples(wi, pk.pk_I);
  ws.u64(pk.pk_S.size());
  write_samples(ws, pk.pk_S);
  const std::uint32_t dim = pk.pk_I.empty() ? dimension_of(pk.pk_S) : dimension_of(pk.pk_I);
  c.add(Section{tags::kPkLocation, dim, wi.take()});
  c.add(Section{tags::kPkService, dim, ws.take()});
  return c;
}

PublicKeyMaterial public_key_from(const Container& c) {
  PublicKeyMaterial pk;
  pk.meta = meta_from_section(c.require(tags::kMeta));
  auto read = [&](SectionTag tag, std::size_t want, const char* what) {
    const Section& s = c.require(tag);
    const std::uint32_t dim = checked_dimension(s.dimension, what);
    WordReader r(s.words);
    const std::size_t n = checked_count(r.u64(), s.words.size(), dim, what);
    if (n != want) throw FormatError(std::string(what) + ": sample count disagrees with META");
    std::vector<TlweSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(r.sample(dim));
    r.expect_done(what);
    return out;
  };
  pk.pk_I = read(tags::kPkLocation, PublicKeyMaterial::location_count(pk.meta), "PKI");
  pk.pk_S = read(tags::kPkService, PublicKeyMaterial::service_count(pk.meta), "PKS");
  if (c.require(tags::kPkLocation).dimension != c.require(tags::kPkService).dimension)
    throw FormatError("PKI and PKS sample dimensions differ");
  pk.used_I.assign(pk.pk_I.size(), false);
  pk.used_S.assign(pk.pk_S.size(), false);
  return pk;
}

Container to_container(const TfheDatabase& db) {
  Container c;
  c.add(to_section(db.meta));
  WordWriter w;
  std::uint32_t dim = 0;
  for (const auto& r : db.records) {
    for (const auto& word : r.location.words) {
      if (!word.empty()) dim = static_cast<std::uint32_t>(word.front().dimension());
      write_samples(w, word);
    }
    write_samples(w, r.service);
  }
  c.add(Section{tags::kEncDb, dim, w.take()});
  return c;
}

TfheDatabase database_from(const Container& c) {
  TfheDatabase db;
  db.meta = meta_from_section(c.require(tags::kMeta));
  const Section& s = c.require(tags::kEncDb);
  const std::uint32_t dim = checked_dimension(s.dimension, "EDB");
  const SessionMeta& m = db.meta;
  const std::uint64_t per_record = std::uint64_t{m.location_words()} * m.l_I + m.l_S;
  if (s.words.size() != std::uint64_t{m.M} * per_record * (dim + 1))
    throw FormatError("EDB: payload size disagrees with META");
  WordReader r(s.words);
  db.records.resize(m.M);
  for (auto& rec : db.records) {
    rec.location.mode = m.mode;
    rec.location.words.resize(m.location_words());
    for (auto& word : rec.location.words)
      for (std::uint32_t j = 0; j < m.l_I; ++j) word.push_back(r.sample(dim));
    for (std::uint32_t j = 0; j < m.l_S; ++j) rec.service.push_back(r.sample(dim));
  }
  r.expect_done("EDB");
  return db;
}

Section to_section(const TfheQuery& q) {
  WordWriter w;
  w.u32(static_cast<std::uint32_t>(q.mode));
  w.u32(static_cast<std::uint32_t>(q.words.size()));
  const std::uint32_t width = q.words.empty() ? 0 : static_cast<std::uint32_t>(q.words.front().size());
  w.u32(width);
  std::uint32_t dim = 0;
  for (const auto& word : q.words) {
    if (word.size() != width) throw std::invalid_argument("query words differ in width");
    if (!word.empty()) dim = static_cast<std::uint32_t>(word.front().dimension());
    write_samples(w, word);
  }
  return Section{tags::kQuery, dim, w.take()};
}

TfheQuery query_from_section(const Section& s) {
  expect(s, tags::kQuery);
  const std::uint32_t dim = checked_dimension(s.dimension, "QRY");
  WordReader r(s.words);
  TfheQuery q;
  const std::uint32_t mode = r.u32();
  if (mode > 2) throw FormatError("QRY: unknown mode");
  q.mode = static_cast<data::Mode>(mode);
  const std::uint32_t count = r.u32();
  const std::uint32_t width = r.u32();
  if (count != engine::query_words(q.mode)) throw FormatError("QRY: word count does not fit the mode");
  if (std::uint64_t{count} * width * (dim + 1) + 3 != s.words.size()) throw FormatError("QRY: payload size mismatch");
  q.words.resize(count);
  for (auto& word : q.words)
    for (std::uint32_t j = 0; j < width; ++j) word.push_back(r.sample(dim));
  r.expect_done("QRY");
  return q;
}

Section response_section(const BitVectorCiphertext& resp) {
  WordWriter w;
  w.u32(static_cast<std::uint32_t>(resp.size()));
  write_samples(w, resp);
  return Section{tags::kResponse, dimension_of(resp), w.take()};
}

BitVectorCiphertext response_from_section(const Section& s) {
  expect(s, tags::kResponse);
  const std::uint32_t dim = checked_dimension(s.dimension, "RESP");
  WordReader r(s.words);
  const std::uint32_t width = r.u32();
  if (std::uint64_t{width} * (dim + 1) + 1 != s.words.size()) throw FormatError("RESP: payload size mismatch");
  BitVectorCiphertext out;
  out.reserve(width);
  for (std::uint32_t j = 0; j < width; ++j) out.push_back(r.sample(dim));
  return out;
}

Bytes encode_single(Section s) {
  Container c;
  c.add(std::move(s));
  return c.encode();
}

}  // namespace velopir::protocol
