#include "velopir/boot/ring.hpp"

#include <algorithm>
#include <stdexcept>

namespace velopir::boot {

RingSecretKey::RingSecretKey(std::vector<IntPolynomial> polys) : polys_(std::move(polys)) {
  for (const auto& p : polys_) {
    if (p.size() != polys_[0].size()) throw std::invalid_argument("ring key polynomial sizes differ");
    for (auto c : p)
      if (c != 0 && c != 1) throw std::invalid_argument("ring key coefficients must be bits");
  }
}

SecretKey RingSecretKey::flatten() const {
  std::vector<std::uint8_t> bits;
  bits.reserve(std::size_t{k()} * N());
  for (const auto& p : polys_)
    for (auto c : p) bits.push_back(static_cast<std::uint8_t>(c));
  return SecretKey(std::move(bits));
}

RingSecretKey keygen_ring(const RingParams& params, Entropy& entropy) {
  params.validate();
  std::vector<IntPolynomial> polys(params.k, IntPolynomial(params.N));
  for (auto& p : polys)
    for (auto& c : p) c = static_cast<std::int32_t>(entropy.next_u32() >> 31);
  return RingSecretKey(std::move(polys));
}

TrlweSample trlwe_trivial(const TorusPolynomial& mu, std::uint32_t k) {
  TrlweSample ct(k, static_cast<std::uint32_t>(mu.size()));
  ct.body() = mu;
  return ct;
}

TrlweSample trlwe_encrypt(const TorusPolynomial& mu, const RingSecretKey& key, double sigma,
                          Entropy& entropy) {
  const std::uint32_t N = key.N();
  if (mu.size() != N) throw std::invalid_argument("message polynomial size mismatch");
  const auto& fft = NegacyclicFft::of(N);
  TrlweSample ct(key.k(), N);
  Spectrum acc = fft.make_spectrum(), fa = fft.make_spectrum(), fs = fft.make_spectrum();
  for (std::uint32_t i = 0; i < key.k(); ++i) {
    for (auto& c : ct.polys[i]) c = Torus(entropy.next_u32());
    fft.forward(std::span<const Torus>(ct.polys[i]), fa);
    fft.forward(std::span<const std::int32_t>(key.poly(i)), fs);
    NegacyclicFft::mul_add(acc, fa, fs);
  }
  TorusPolynomial& b = ct.body();
  fft.inverse(acc, b);
  for (std::uint32_t j = 0; j < N; ++j) b[j] += mu[j] + sample_noise(sigma, entropy);
  return ct;
}

TorusPolynomial trlwe_phase(const TrlweSample& ct, const RingSecretKey& key) {
  const std::uint32_t N = key.N();
  if (ct.k() != key.k() || ct.N() != N) throw std::invalid_argument("TRLWE/key shape mismatch");
  const auto& fft = NegacyclicFft::of(N);
  Spectrum acc = fft.make_spectrum(), fa = fft.make_spectrum(), fs = fft.make_spectrum();
  for (std::uint32_t i = 0; i < key.k(); ++i) {
    fft.forward(std::span<const Torus>(ct.polys[i]), fa);
    fft.forward(std::span<const std::int32_t>(key.poly(i)), fs);
    NegacyclicFft::mul_add(acc, fa, fs);
  }
  TorusPolynomial as(N);
  fft.inverse(acc, as);
  TorusPolynomial out = ct.body();
  for (std::uint32_t j = 0; j < N; ++j) out[j] -= as[j];
  return out;
}

TrgswSample trgsw_encrypt(std::int32_t m, const RingSecretKey& key, const RingParams& params,
                          Entropy& entropy) {
  const TorusPolynomial zero(params.N);
  TrgswSample g;
  g.rows.reserve(std::size_t{params.k + 1} * params.bk_levels);
  for (std::uint32_t i = 0; i <= params.k; ++i) {
    for (std::uint32_t j = 0; j < params.bk_levels; ++j) {
      TrlweSample row = trlwe_encrypt(zero, key, params.sigma_bk, entropy);
      row.polys[i][0] += m * dyadic(1, (j + 1) * params.bk_base_log);
      g.rows.push_back(std::move(row));
    }
  }
  return g;
}

TrgswSpectrum::TrgswSpectrum(const TrgswSample& sample) {
  if (sample.rows.empty()) return;
  width_ = sample.rows[0].polys.size();
  const auto& fft = NegacyclicFft::of(sample.rows[0].N());
  data_.reserve(sample.rows.size() * width_);
  for (const auto& row : sample.rows) {
    for (const auto& p : row.polys) {
      Spectrum s = fft.make_spectrum();
      fft.forward(std::span<const Torus>(p), s);
      data_.push_back(std::move(s));
    }
  }
}

namespace {

std::uint32_t decomposition_offset(std::uint32_t base_log, std::uint32_t levels) {
  const std::uint32_t half_base = 1u << (base_log - 1);
  std::uint32_t offset = 0;
  for (std::uint32_t j = 1; j <= levels; ++j) offset += half_base << (32 - j * base_log);
  if (base_log * levels < 32) offset += 1u << (32 - base_log * levels - 1);
  return offset;
}

}  // namespace

std::vector<std::int32_t> gadget_digits(Torus x, std::uint32_t base_log, std::uint32_t levels) {
  const std::uint32_t mask = (1u << base_log) - 1;
  const std::int32_t half_base = 1 << (base_log - 1);
  const std::uint32_t t = x.raw + decomposition_offset(base_log, levels);
  std::vector<std::int32_t> d(levels);
  for (std::uint32_t j = 0; j < levels; ++j)
    d[j] = static_cast<std::int32_t>((t >> (32 - (j + 1) * base_log)) & mask) - half_base;
  return d;
}

void gadget_decompose(std::span<const Torus> poly, std::uint32_t base_log, std::uint32_t levels,
                      std::span<IntPolynomial> out) {
  const std::uint32_t mask = (1u << base_log) - 1;
  const std::int32_t half_base = 1 << (base_log - 1);
  const std::uint32_t offset = decomposition_offset(base_log, levels);
  const std::size_t n = poly.size();
  for (std::uint32_t j = 0; j < levels; ++j) {
    const std::uint32_t shift = 32 - (j + 1) * base_log;
    auto& dst = out[j];
    for (std::size_t c = 0; c < n; ++c)
      dst[c] = static_cast<std::int32_t>(((poly[c].raw + offset) >> shift) & mask) - half_base;
  }
}

TrlweSample external_product(const TrgswSpectrum& g, const TrlweSample& ct,
                             const RingParams& params) {
  const std::uint32_t N = ct.N();
  const std::uint32_t width = ct.k() + 1;
  const std::uint32_t levels = params.bk_levels;
  if (g.rows() != std::size_t{width} * levels) throw std::invalid_argument("TRGSW shape mismatch");
  const auto& fft = NegacyclicFft::of(N);
  std::vector<IntPolynomial> digits(levels, IntPolynomial(N));
  std::vector<Spectrum> acc(width, fft.make_spectrum());
  Spectrum d = fft.make_spectrum();
  for (std::uint32_t p = 0; p < width; ++p) {
    gadget_decompose(ct.polys[p], params.bk_base_log, levels, digits);
    for (std::uint32_t j = 0; j < levels; ++j) {
      fft.forward(std::span<const std::int32_t>(digits[j]), d);
      for (std::uint32_t q = 0; q < width; ++q) NegacyclicFft::mul_add(acc[q], d, g.at(p * levels + j, q));
    }
  }
  TrlweSample out(ct.k(), N);
  for (std::uint32_t q = 0; q < width; ++q) fft.inverse(acc[q], out.polys[q]);
  return out;
}

TlweSample sample_extract(const TrlweSample& ct, std::size_t index) {
  if (index != 0) throw std::invalid_argument("sample_extract supports index 0 only");
  const std::uint32_t N = ct.N();
  TlweSample out(std::size_t{ct.k()} * N);
  for (std::uint32_t i = 0; i < ct.k(); ++i) {
    const auto& a = ct.polys[i];
    Torus* dst = out.a.data() + std::size_t{i} * N;
    dst[0] = a[0];
    for (std::uint32_t j = 1; j < N; ++j) dst[j] = -a[N - j];
  }
  out.b = ct.body()[0];
  return out;
}

}  // namespace velopir::boot
