#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "velopir/torus/entropy.hpp"
#include "velopir/torus/torus.hpp"

namespace velopir {

struct TlweParams {
  std::uint32_t n = 630;
  /// Standard deviation of fresh encryption noise, in torus units.
  double sigma = 0x1.0p-15;
  std::uint32_t lambda = 128;

  /// Throws std::invalid_argument unless n >= 1 and 0 < sigma < 1/16.
  void validate() const;
  friend bool operator==(const TlweParams&, const TlweParams&) = default;
};

/// Binary LWE secret key.
class SecretKey {
 public:
  SecretKey() = default;
  /// Throws std::invalid_argument if any entry is not 0 or 1.
  explicit SecretKey(std::vector<std::uint8_t> bits);

  std::size_t size() const { return bits_.size(); }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// TLWE sample (a, b) with phase b - <a, s>. Dimension is a.size(); the same
/// type carries level-0 samples (dimension n) and extracted samples
/// (dimension k*N).
struct TlweSample {
  std::vector<Torus> a;
  Torus b;

  TlweSample() = default;
  explicit TlweSample(std::size_t dim) : a(dim) {}

  std::size_t dimension() const { return a.size(); }

  TlweSample& operator+=(const TlweSample& o);
  TlweSample& operator-=(const TlweSample& o);
  /// In-place multiplication by a small integer.
  TlweSample& scale(std::int32_t k);

  friend bool operator==(const TlweSample&, const TlweSample&) = default;
};

/// Encrypted word, one sample per bit. Index 0 is the least significant
/// bit and index width-1 the two's-complement sign bit.
using BitVectorCiphertext = std::vector<TlweSample>;

/// Ecd: m -> m/4 - 1/8.
constexpr Torus encode_bit(bool m) { return m ? dyadic(1, 3) : dyadic(-1, 3); }

SecretKey keygen_secret(const TlweParams& params, Entropy& entropy);

/// Box-Muller Gaussian, reduced mod 1 and rounded to 32 bits.
/// Throws std::invalid_argument unless 0 < sigma < 1/16.
Torus sample_noise(double sigma, Entropy& entropy);

/// Encryption of an arbitrary torus message under the secret key.
TlweSample tlwe_encrypt_torus(Torus mu, const SecretKey& sk, double sigma, Entropy& entropy);
TlweSample tlwe_encrypt(bool m, const SecretKey& sk, const TlweParams& params, Entropy& entropy);

/// b - <a, s>. Throws std::invalid_argument on dimension mismatch.
Torus phase(const TlweSample& ct, const SecretKey& sk);

/// Nearest of {-1/8, +1/8}; exact ties at 0 and 1/2 decode to 0.
constexpr bool decode_phase(Torus p) { return p.as_signed() > 0; }
bool tlwe_decrypt(const TlweSample& ct, const SecretKey& sk);

/// Noiseless, key-independent sample (0, mu).
TlweSample trivial(Torus mu, std::size_t dim);

TlweSample tlwe_add(const TlweSample& x, const TlweSample& y);
TlweSample tlwe_sub(const TlweSample& x, const TlweSample& y);
TlweSample tlwe_neg(const TlweSample& x);

}  // namespace velopir
