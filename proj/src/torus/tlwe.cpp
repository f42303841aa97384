#include "velopir/torus/tlwe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace velopir {

namespace {

void require_same_dimension(std::size_t x, std::size_t y) {
  if (x != y)
    throw std::invalid_argument("TLWE dimension mismatch: " + std::to_string(x) + " vs " +
                                std::to_string(y));
}

}  // namespace

void TlweParams::validate() const {
  if (n < 1) throw std::invalid_argument("TLWE dimension must be at least 1");
  if (!(sigma > 0.0 && sigma < 1.0 / 16.0))
    throw std::invalid_argument("TLWE noise sigma must lie in (0, 1/16)");
}

SecretKey::SecretKey(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    if (b > 1) throw std::invalid_argument("secret key entries must be 0 or 1");
}

TlweSample& TlweSample::operator+=(const TlweSample& o) {
  require_same_dimension(a.size(), o.a.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
  b += o.b;
  return *this;
}

TlweSample& TlweSample::operator-=(const TlweSample& o) {
  require_same_dimension(a.size(), o.a.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
  b -= o.b;
  return *this;
}

TlweSample& TlweSample::scale(std::int32_t k) {
  for (auto& x : a) x = k * x;
  b = k * b;
  return *this;
}

SecretKey keygen_secret(const TlweParams& params, Entropy& entropy) {
  params.validate();
  std::vector<std::uint8_t> bits(params.n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(entropy.next_u32() >> 31);
  return SecretKey(std::move(bits));
}

Torus sample_noise(double sigma, Entropy& entropy) {
  if (!(sigma > 0.0 && sigma < 1.0 / 16.0))
    throw std::invalid_argument("noise sigma must lie in (0, 1/16)");
  double u1 = entropy.next_open_unit();
  double u2 = entropy.next_open_unit();
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return Torus::from_real(z * sigma);
}

TlweSample tlwe_encrypt_torus(Torus mu, const SecretKey& sk, double sigma, Entropy& entropy) {
  TlweSample ct(sk.size());
  Torus acc = mu + sample_noise(sigma, entropy);
  for (std::size_t i = 0; i < ct.a.size(); ++i) {
    ct.a[i] = Torus(entropy.next_u32());
    if (sk[i]) acc += ct.a[i];
  }
  ct.b = acc;
  return ct;
}

TlweSample tlwe_encrypt(bool m, const SecretKey& sk, const TlweParams& params,
                        Entropy& entropy) {
  require_same_dimension(sk.size(), params.n);
  return tlwe_encrypt_torus(encode_bit(m), sk, params.sigma, entropy);
}

Torus phase(const TlweSample& ct, const SecretKey& sk) {
  require_same_dimension(ct.a.size(), sk.size());
  std::uint32_t dot = 0;
  auto bits = sk.bits();
  for (std::size_t i = 0; i < ct.a.size(); ++i) dot += ct.a[i].raw * bits[i];
  return ct.b - Torus(dot);
}

bool tlwe_decrypt(const TlweSample& ct, const SecretKey& sk) {
  return decode_phase(phase(ct, sk));
}

TlweSample trivial(Torus mu, std::size_t dim) {
  TlweSample ct(dim);
  ct.b = mu;
  return ct;
}

TlweSample tlwe_add(const TlweSample& x, const TlweSample& y) {
  TlweSample r = x;
  r += y;
  return r;
}

TlweSample tlwe_sub(const TlweSample& x, const TlweSample& y) {
  TlweSample r = x;
  r -= y;
  return r;
}

TlweSample tlwe_neg(const TlweSample& x) {
  TlweSample r = x;
  r.scale(-1);
  return r;
}

}  // namespace velopir
