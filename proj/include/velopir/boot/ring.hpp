#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "velopir/boot/params.hpp"
#include "velopir/boot/polynomial.hpp"
#include "velopir/torus/entropy.hpp"
#include "velopir/torus/tlwe.hpp"

namespace velopir::boot {

/// k binary polynomials of size N.
class RingSecretKey {
 public:
  RingSecretKey() = default;
  explicit RingSecretKey(std::vector<IntPolynomial> polys);

  std::uint32_t k() const { return static_cast<std::uint32_t>(polys_.size()); }
  std::uint32_t N() const { return polys_.empty() ? 0 : static_cast<std::uint32_t>(polys_[0].size()); }
  const IntPolynomial& poly(std::size_t i) const { return polys_[i]; }

  /// The key under which sample_extract output decrypts: coefficient j of
  /// polynomial i sits at position i*N + j.
  SecretKey flatten() const;

 private:
  std::vector<IntPolynomial> polys_;
};

RingSecretKey keygen_ring(const RingParams& params, Entropy& entropy);

/// (a_0, ..., a_{k-1}, b) with phase b - sum a_i * s_i.
struct TrlweSample {
  std::vector<TorusPolynomial> polys;

  TrlweSample() = default;
  TrlweSample(std::uint32_t k, std::uint32_t N) : polys(k + 1, TorusPolynomial(N)) {}

  std::uint32_t k() const { return static_cast<std::uint32_t>(polys.size()) - 1; }
  std::uint32_t N() const { return static_cast<std::uint32_t>(polys[0].size()); }
  TorusPolynomial& body() { return polys.back(); }
  const TorusPolynomial& body() const { return polys.back(); }
};

TrlweSample trlwe_trivial(const TorusPolynomial& mu, std::uint32_t k);
TrlweSample trlwe_encrypt(const TorusPolynomial& mu, const RingSecretKey& key, double sigma,
                          Entropy& entropy);
TorusPolynomial trlwe_phase(const TrlweSample& ct, const RingSecretKey& key);

/// Gadget-decomposed encryption of a small integer: row i*l + j is a TRLWE
/// encryption of zero with m / Bg^(j+1) added to polynomial i.
struct TrgswSample {
  std::vector<TrlweSample> rows;
};

TrgswSample trgsw_encrypt(std::int32_t m, const RingSecretKey& key, const RingParams& params,
                          Entropy& entropy);

/// TRGSW sample with every polynomial held in the transform domain.
class TrgswSpectrum {
 public:
  TrgswSpectrum() = default;
  explicit TrgswSpectrum(const TrgswSample& sample);

  const Spectrum& at(std::size_t row, std::size_t poly) const { return data_[row * width_ + poly]; }
  std::size_t rows() const { return width_ ? data_.size() / width_ : 0; }

 private:
  std::size_t width_ = 0;
  std::vector<Spectrum> data_;
};

/// Balanced digits in [-Bg/2, Bg/2) of x rounded to base_log*levels bits,
/// most significant level first: x ~ sum_j d_j * 2^(32 - (j+1)*base_log).
std::vector<std::int32_t> gadget_digits(Torus x, std::uint32_t base_log, std::uint32_t levels);

/// Coefficientwise gadget_digits; out holds `levels` polynomials.
void gadget_decompose(std::span<const Torus> poly, std::uint32_t base_log, std::uint32_t levels,
                      std::span<IntPolynomial> out);

/// TRGSW(m) (x) TRLWE(mu) = TRLWE(m * mu).
TrlweSample external_product(const TrgswSpectrum& g, const TrlweSample& ct,
                             const RingParams& params);

/// LWE sample of the constant coefficient under RingSecretKey::flatten().
/// Only index 0 is supported; other indices throw std::invalid_argument.
TlweSample sample_extract(const TrlweSample& ct, std::size_t index = 0);

}  // namespace velopir::boot
