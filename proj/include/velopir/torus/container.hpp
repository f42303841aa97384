#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "velopir/torus/tlwe.hpp"

namespace velopir {

/// Raised when a serialized container or payload is malformed.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Bytes = std::vector<std::uint8_t>;

/// Four-character section tag, e.g. "TLWE".
using SectionTag = std::array<char, 4>;
constexpr SectionTag make_tag(const char (&s)[5]) { return {s[0], s[1], s[2], s[3]}; }

namespace tags {
inline constexpr SectionTag kParams = make_tag("PARM");
inline constexpr SectionTag kSecretKey = make_tag("SKEY");
inline constexpr SectionTag kTlwe = make_tag("TLWE");
}  // namespace tags

/// One section: tag, a dimension field, and a payload of 32-bit words.
struct Section {
  SectionTag tag{};
  std::uint32_t dimension = 0;
  std::vector<std::uint32_t> words;
};

/// The "VLP1" container. Byte layout, all integers little-endian:
///
///   "VLP1" | u32 section_count |
///   { tag[4] | u32 dimension | u64 word_count | u32 word[word_count] }*
class Container {
 public:
  void add(Section s) { sections_.push_back(std::move(s)); }
  const std::vector<Section>& sections() const { return sections_; }

  /// First section with the given tag; throws FormatError when absent.
  const Section& require(SectionTag tag) const;
  bool contains(SectionTag tag) const;

  Bytes encode() const;
  static Container decode(std::span<const std::uint8_t> bytes);

  void save(const std::filesystem::path& path) const;
  static Container load(const std::filesystem::path& path);

 private:
  std::vector<Section> sections_;
};

/// Appends words to a section payload.
class WordWriter {
 public:
  void u32(std::uint32_t v) { words_.push_back(v); }
  void u64(std::uint64_t v) {
    words_.push_back(static_cast<std::uint32_t>(v));
    words_.push_back(static_cast<std::uint32_t>(v >> 32));
  }
  void f64(double v);
  void torus(Torus t) { words_.push_back(t.raw); }
  void torus_span(std::span<const Torus> ts);
  void sample(const TlweSample& ct);

  std::vector<std::uint32_t> take() { return std::move(words_); }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::uint32_t> words_;
};

/// Bounds-checked reader over a section payload.
class WordReader {
 public:
  explicit WordReader(std::span<const std::uint32_t> words) : words_(words) {}

  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  Torus torus() { return Torus(u32()); }
  void torus_into(std::span<Torus> out);
  TlweSample sample(std::size_t dim);

  bool done() const { return pos_ == words_.size(); }
  /// Throws unless every word has been consumed.
  void expect_done(std::string_view what) const;

 private:
  void need(std::size_t count) const;
  std::span<const std::uint32_t> words_;
  std::size_t pos_ = 0;
};

Section to_section(const TlweParams& p);
TlweParams params_from_section(const Section& s);
Section to_section(const SecretKey& sk);
SecretKey secret_key_from_section(const Section& s);
Section to_section(const TlweSample& ct);
TlweSample sample_from_section(const Section& s);

}  // namespace velopir
