#include "velopir/torus/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace velopir {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'V', 'L', 'P', '1'};
constexpr std::uint64_t kMaxWords = std::uint64_t{1} << 32;

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteCursor {
 public:
  explicit ByteCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("VLP1 container truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t lo = u32();
    std::uint64_t hi = u32();
    return lo | (hi << 32);
  }
  void raw(void* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string tag_string(SectionTag t) { return std::string(t.begin(), t.end()); }

void expect_tag(const Section& s, SectionTag tag) {
  if (s.tag != tag)
    throw FormatError("expected section " + tag_string(tag) + ", found " + tag_string(s.tag));
}

}  // namespace

const Section& Container::require(SectionTag tag) const {
  for (const auto& s : sections_)
    if (s.tag == tag) return s;
  throw FormatError("missing section " + tag_string(tag));
}

bool Container::contains(SectionTag tag) const {
  for (const auto& s : sections_)
    if (s.tag == tag) return true;
  return false;
}

Bytes Container::encode() const {
  std::size_t total = 8;
  for (const auto& s : sections_) total += 16 + 4 * s.words.size();
  Bytes out;
  out.reserve(total);
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_u32(out, static_cast<std::uint32_t>(sections_.size()));
  for (const auto& s : sections_) {
    out.insert(out.end(), s.tag.begin(), s.tag.end());
    put_u32(out, s.dimension);
    put_u64(out, s.words.size());
    if constexpr (std::endian::native == std::endian::little) {
      auto* p = reinterpret_cast<const std::uint8_t*>(s.words.data());
      out.insert(out.end(), p, p + 4 * s.words.size());
    } else {
      for (auto w : s.words) put_u32(out, w);
    }
  }
  return out;
}

Container Container::decode(std::span<const std::uint8_t> bytes) {
  ByteCursor cur(bytes);
  std::array<std::uint8_t, 4> magic{};
  cur.raw(magic.data(), 4);
  if (magic != kMagic) throw FormatError("bad magic: not a VLP1 container");
  std::uint32_t count = cur.u32();
  Container c;
  for (std::uint32_t i = 0; i < count; ++i) {
    Section s;
    cur.raw(s.tag.data(), 4);
    s.dimension = cur.u32();
    std::uint64_t n = cur.u64();
    if (n >= kMaxWords || n * 4 > cur.remaining())
      throw FormatError("section " + tag_string(s.tag) + " length exceeds container");
    s.words.resize(static_cast<std::size_t>(n));
    if constexpr (std::endian::native == std::endian::little) {
      cur.raw(s.words.data(), 4 * s.words.size());
    } else {
      for (auto& w : s.words) w = cur.u32();
    }
    c.add(std::move(s));
  }
  if (cur.remaining() != 0) throw FormatError("trailing bytes after VLP1 container");
  return c;
}

void Container::save(const std::filesystem::path& path) const {
  Bytes bytes = encode();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Container Container::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode(bytes);
}

void WordWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void WordWriter::torus_span(std::span<const Torus> ts) {
  for (auto t : ts) words_.push_back(t.raw);
}

void WordWriter::sample(const TlweSample& ct) {
  torus_span(ct.a);
  torus(ct.b);
}

void WordReader::need(std::size_t count) const {
  if (words_.size() - pos_ < count) throw FormatError("section payload truncated");
}

std::uint32_t WordReader::u32() {
  need(1);
  return words_[pos_++];
}

std::uint64_t WordReader::u64() {
  need(2);
  std::uint64_t lo = words_[pos_];
  std::uint64_t hi = words_[pos_ + 1];
  pos_ += 2;
  return lo | (hi << 32);
}

double WordReader::f64() { return std::bit_cast<double>(u64()); }

void WordReader::torus_into(std::span<Torus> out) {
  need(out.size());
  for (auto& t : out) t = Torus(words_[pos_++]);
}

TlweSample WordReader::sample(std::size_t dim) {
  TlweSample ct(dim);
  torus_into(ct.a);
  ct.b = torus();
  return ct;
}

void WordReader::expect_done(std::string_view what) const {
  if (!done()) throw FormatError("unexpected trailing words in " + std::string(what));
}

Section to_section(const TlweParams& p) {
  WordWriter w;
  w.u32(p.n);
  w.f64(p.sigma);
  w.u32(p.lambda);
  return Section{tags::kParams, p.n, w.take()};
}

TlweParams params_from_section(const Section& s) {
  expect_tag(s, tags::kParams);
  WordReader r(s.words);
  TlweParams p;
  p.n = r.u32();
  p.sigma = r.f64();
  p.lambda = r.u32();
  r.expect_done("PARM");
  if (p.n != s.dimension) throw FormatError("PARM dimension field disagrees with payload");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return p;
}

Section to_section(const SecretKey& sk) {
  std::vector<std::uint32_t> words(sk.bits().begin(), sk.bits().end());
  return Section{tags::kSecretKey, static_cast<std::uint32_t>(sk.size()), std::move(words)};
}

SecretKey secret_key_from_section(const Section& s) {
  expect_tag(s, tags::kSecretKey);
  if (s.words.size() != s.dimension) throw FormatError("SKEY length disagrees with dimension");
  std::vector<std::uint8_t> bits(s.words.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (s.words[i] > 1) throw FormatError("SKEY entry is not a bit");
    bits[i] = static_cast<std::uint8_t>(s.words[i]);
  }
  return SecretKey(std::move(bits));
}

Section to_section(const TlweSample& ct) {
  WordWriter w;
  w.sample(ct);
  return Section{tags::kTlwe, static_cast<std::uint32_t>(ct.dimension()), w.take()};
}

TlweSample sample_from_section(const Section& s) {
  expect_tag(s, tags::kTlwe);
  if (s.words.size() != std::size_t{s.dimension} + 1)
    throw FormatError("TLWE length disagrees with dimension");
  WordReader r(s.words);
  return r.sample(s.dimension);
}

}  // namespace velopir
