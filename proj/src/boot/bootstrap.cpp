#include "velopir/boot/bootstrap.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace velopir::boot {

KeySwitchKey::KeySwitchKey(std::uint32_t in_dim, std::uint32_t out_dim, std::uint32_t base_log,
                           std::uint32_t levels)
    : in_dim_(in_dim),
      out_dim_(out_dim),
      base_log_(base_log),
      levels_(levels),
      data_(std::size_t{in_dim} * levels * (std::size_t{out_dim} + 1)) {}

KeySwitchKey gen_key_switch_key(const SecretKey& in_key, const SecretKey& out_key,
                                const RingParams& params, Entropy& entropy) {
  const auto in_dim = static_cast<std::uint32_t>(in_key.size());
  const auto out_dim = static_cast<std::uint32_t>(out_key.size());
  KeySwitchKey ksk(in_dim, out_dim, params.ks_base_log, params.ks_levels);
  for (std::uint32_t i = 0; i < in_dim; ++i) {
    for (std::uint32_t j = 0; j < params.ks_levels; ++j) {
      const Torus mu = static_cast<std::int32_t>(in_key[i]) * dyadic(1, (j + 1) * params.ks_base_log);
      TlweSample e = tlwe_encrypt_torus(mu, out_key, params.sigma_ks, entropy);
      Torus* dst = ksk.entry(i, j);
      std::copy(e.a.begin(), e.a.end(), dst);
      dst[out_dim] = e.b;
    }
  }
  return ksk;
}

TlweSample key_switch(const TlweSample& ct, const KeySwitchKey& ksk) {
  if (ct.dimension() != ksk.in_dim()) throw std::invalid_argument("key switch input dimension mismatch");
  const std::uint32_t out_dim = ksk.out_dim();
  const std::uint32_t base_log = ksk.base_log();
  const std::uint32_t levels = ksk.levels();
  const std::uint32_t mask = (1u << base_log) - 1;
  const std::int32_t half_base = 1 << (base_log - 1);
  std::uint32_t offset = 0;
  for (std::uint32_t j = 1; j <= levels; ++j) offset += static_cast<std::uint32_t>(half_base) << (32 - j * base_log);
  if (base_log * levels < 32) offset += 1u << (32 - base_log * levels - 1);

  std::vector<std::uint32_t> acc(out_dim + 1, 0);
  acc[out_dim] = ct.b.raw;
  for (std::uint32_t i = 0; i < ksk.in_dim(); ++i) {
    const std::uint32_t t = ct.a[i].raw + offset;
    for (std::uint32_t j = 0; j < levels; ++j) {
      const std::int32_t d = static_cast<std::int32_t>((t >> (32 - (j + 1) * base_log)) & mask) - half_base;
      if (d == 0) continue;
      const auto ud = static_cast<std::uint32_t>(d);
      const Torus* e = ksk.entry(i, j);
      for (std::uint32_t c = 0; c <= out_dim; ++c) acc[c] -= ud * e[c].raw;
    }
  }
  TlweSample out(out_dim);
  for (std::uint32_t c = 0; c < out_dim; ++c) out.a[c] = Torus(acc[c]);
  out.b = Torus(acc[out_dim]);
  return out;
}

EvaluationKeySet::EvaluationKeySet(ParameterSet params, std::vector<TrgswSample> bsk, KeySwitchKey ksk) {
  params.lwe.validate();
  params.ring.validate();
  if (bsk.size() != params.lwe.n) throw std::invalid_argument("bootstrapping key length must equal n");
  if (ksk.in_dim() != params.ring.k * params.ring.N || ksk.out_dim() != params.lwe.n)
    throw std::invalid_argument("key-switching key shape mismatch");
  auto impl = std::make_shared<Impl>();
  impl->params = params;
  impl->spectra.reserve(bsk.size());
  for (const auto& g : bsk) impl->spectra.emplace_back(g);
  impl->bsk = std::move(bsk);
  impl->ksk = std::move(ksk);
  impl_ = std::move(impl);
}

EvaluationKeySet gen_evaluation_keys(const SecretKey& lwe_key, const RingSecretKey& ring_key,
                                     const ParameterSet& params, Entropy& entropy) {
  if (lwe_key.size() != params.lwe.n) throw std::invalid_argument("level-0 key size mismatch");
  if (ring_key.k() != params.ring.k || ring_key.N() != params.ring.N)
    throw std::invalid_argument("ring key shape mismatch");
  std::vector<TrgswSample> bsk;
  bsk.reserve(params.lwe.n);
  for (std::uint32_t i = 0; i < params.lwe.n; ++i)
    bsk.push_back(trgsw_encrypt(lwe_key[i], ring_key, params.ring, entropy));
  KeySwitchKey ksk = gen_key_switch_key(ring_key.flatten(), lwe_key, params.ring, entropy);
  return EvaluationKeySet(params, std::move(bsk), std::move(ksk));
}

KeyBundle generate_keys(const ParameterSet& params, Entropy& entropy) {
  KeyBundle kb;
  kb.params = params;
  kb.lwe_key = keygen_secret(params.lwe, entropy);
  kb.ring_key = keygen_ring(params.ring, entropy);
  kb.evk = gen_evaluation_keys(kb.lwe_key, kb.ring_key, params, entropy);
  return kb;
}

std::uint32_t mod_switch(Torus x, std::uint32_t N) {
  const std::uint64_t two_n = 2ull * N;
  return static_cast<std::uint32_t>(((std::uint64_t{x.raw} * two_n + (1ull << 31)) >> 32) % two_n);
}

namespace {

struct RotateWorkspace {
  TorusPolynomial rotated;
  std::vector<IntPolynomial> digits;
  Spectrum digit_spectrum;
  std::vector<Spectrum> acc;
  TorusPolynomial product;

  void ensure(std::uint32_t width, std::uint32_t N, std::uint32_t levels) {
    if (rotated.size() != N) {
      rotated.assign(N, Torus{});
      product.assign(N, Torus{});
      digit_spectrum.assign(N / 2, Complex{});
      digits.clear();
      acc.clear();
    }
    if (digits.size() != levels) digits.assign(levels, IntPolynomial(N));
    if (acc.size() != width) acc.assign(width, Spectrum(N / 2));
  }
};

}  // namespace

TrlweSample blind_rotate(const TrlweSample& v, const TlweSample& ct, const EvaluationKeySet& evk) {
  const ParameterSet& params = evk.params();
  const std::uint32_t n = params.lwe.n;
  const std::uint32_t N = params.ring.N;
  const std::uint32_t levels = params.ring.bk_levels;
  const std::uint32_t base_log = params.ring.bk_base_log;
  if (ct.dimension() != n) throw std::invalid_argument("blind rotation input dimension mismatch");
  if (v.N() != N || v.k() != params.ring.k) throw std::invalid_argument("test vector shape mismatch");
  const std::uint32_t width = v.k() + 1;
  const auto& fft = NegacyclicFft::of(N);

  TrlweSample acc(v.k(), N);
  const std::uint32_t bbar = mod_switch(ct.b, N);
  for (std::uint32_t p = 0; p < width; ++p) mul_by_monomial(v.polys[p], 2 * N - bbar, acc.polys[p]);

  thread_local RotateWorkspace ws;
  ws.ensure(width, N, levels);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t abar = mod_switch(ct.a[i], N);
    if (abar == 0) continue;
    const TrgswSpectrum& g = evk.bsk_spectrum(i);
    for (auto& s : ws.acc) std::fill(s.begin(), s.end(), Complex{});
    // acc += bsk_i (x) ((X^abar - 1) * acc)
    for (std::uint32_t p = 0; p < width; ++p) {
      mul_by_monomial(acc.polys[p], abar, ws.rotated);
      for (std::uint32_t c = 0; c < N; ++c) ws.rotated[c] -= acc.polys[p][c];
      gadget_decompose(ws.rotated, base_log, levels, ws.digits);
      for (std::uint32_t j = 0; j < levels; ++j) {
        fft.forward(std::span<const std::int32_t>(ws.digits[j]), ws.digit_spectrum);
        for (std::uint32_t q = 0; q < width; ++q)
          NegacyclicFft::mul_add(ws.acc[q], ws.digit_spectrum, g.at(p * levels + j, q));
      }
    }
    for (std::uint32_t q = 0; q < width; ++q) {
      fft.inverse(ws.acc[q], ws.product);
      for (std::uint32_t c = 0; c < N; ++c) acc.polys[q][c] += ws.product[c];
    }
  }
  return acc;
}

TlweSample bootstrap_without_keyswitch(const TlweSample& ct, Torus mu, const EvaluationKeySet& evk) {
  const RingParams& ring = evk.params().ring;
  const TrlweSample test_vector = trlwe_trivial(TorusPolynomial(ring.N, mu), ring.k);
  return sample_extract(blind_rotate(test_vector, ct, evk), 0);
}

TlweSample bootstrap(const TlweSample& ct, Torus mu, const EvaluationKeySet& evk) {
  return key_switch(bootstrap_without_keyswitch(ct, mu, evk), evk.ksk());
}

namespace {

void expect(const Section& s, SectionTag tag) {
  if (s.tag != tag)
    throw FormatError("expected section " + std::string(tag.begin(), tag.end()) + ", got " +
                      std::string(s.tag.begin(), s.tag.end()));
}

template <class F>
auto as_format_error(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace

Section to_section(const RingParams& p) {
  WordWriter w;
  w.u32(p.N);
  w.u32(p.k);
  w.u32(p.bk_base_log);
  w.u32(p.bk_levels);
  w.u32(p.ks_base_log);
  w.u32(p.ks_levels);
  w.f64(p.sigma_bk);
  w.f64(p.sigma_ks);
  return Section{tags::kRingParams, p.N, w.take()};
}

RingParams ring_params_from_section(const Section& s) {
  expect(s, tags::kRingParams);
  WordReader r(s.words);
  RingParams p;
  p.N = r.u32();
  p.k = r.u32();
  p.bk_base_log = r.u32();
  p.bk_levels = r.u32();
  p.ks_base_log = r.u32();
  p.ks_levels = r.u32();
  p.sigma_bk = r.f64();
  p.sigma_ks = r.f64();
  r.expect_done("RPRM");
  if (p.N != s.dimension) throw FormatError("RPRM dimension field disagrees with payload");
  as_format_error([&] {
    p.validate();
    return 0;
  });
  return p;
}

Section to_section(const RingSecretKey& key) {
  WordWriter w;
  w.u32(key.k());
  for (std::uint32_t i = 0; i < key.k(); ++i)
    for (auto c : key.poly(i)) w.u32(static_cast<std::uint32_t>(c));
  return Section{tags::kRingKey, key.N(), w.take()};
}

RingSecretKey ring_key_from_section(const Section& s) {
  expect(s, tags::kRingKey);
  WordReader r(s.words);
  const std::uint32_t k = r.u32();
  const std::uint32_t N = s.dimension;
  if (k == 0 || N == 0 || s.words.size() != 1 + std::size_t{k} * N)
    throw FormatError("RKEY length disagrees with shape");
  std::vector<IntPolynomial> polys(k, IntPolynomial(N));
  for (auto& p : polys)
    for (auto& c : p) c = static_cast<std::int32_t>(r.u32());
  return as_format_error([&] { return RingSecretKey(std::move(polys)); });
}

void append_sections(Container& c, const EvaluationKeySet& evk) {
  const ParameterSet& params = evk.params();
  c.add(to_section(params.lwe));
  c.add(to_section(params.ring));

  WordWriter bw;
  for (const auto& g : evk.bsk())
    for (const auto& row : g.rows)
      for (const auto& poly : row.polys) bw.torus_span(poly);
  c.add(Section{tags::kBootstrapKey, params.lwe.n, bw.take()});

  const KeySwitchKey& ksk = evk.ksk();
  WordWriter kw;
  kw.u32(ksk.in_dim());
  kw.u32(ksk.base_log());
  kw.u32(ksk.levels());
  kw.torus_span(ksk.data());
  c.add(Section{tags::kKeySwitchKey, ksk.out_dim(), kw.take()});
}

EvaluationKeySet evaluation_keys_from(const Container& c) {
  ParameterSet params;
  params.lwe = params_from_section(c.require(velopir::tags::kParams));
  params.ring = ring_params_from_section(c.require(tags::kRingParams));
  const std::uint32_t n = params.lwe.n;
  const std::uint32_t N = params.ring.N;
  const std::uint32_t width = params.ring.k + 1;
  const std::uint32_t rows = width * params.ring.bk_levels;

  const Section& bs = c.require(tags::kBootstrapKey);
  if (bs.dimension != n || bs.words.size() != std::size_t{n} * rows * width * N)
    throw FormatError("BSK length disagrees with parameters");
  WordReader br(bs.words);
  std::vector<TrgswSample> bsk(n);
  for (auto& g : bsk) {
    g.rows.assign(rows, TrlweSample(params.ring.k, N));
    for (auto& row : g.rows)
      for (auto& poly : row.polys) br.torus_into(poly);
  }

  const Section& ks = c.require(tags::kKeySwitchKey);
  WordReader kr(ks.words);
  const std::uint32_t in_dim = kr.u32();
  const std::uint32_t base_log = kr.u32();
  const std::uint32_t levels = kr.u32();
  if (in_dim != params.ring.k * N || ks.dimension != n || base_log != params.ring.ks_base_log ||
      levels != params.ring.ks_levels)
    throw FormatError("KSK shape disagrees with parameters");
  KeySwitchKey ksk(in_dim, n, base_log, levels);
  if (ks.words.size() != 3 + ksk.data().size()) throw FormatError("KSK length disagrees with shape");
  kr.torus_into(ksk.data());

  return as_format_error([&] { return EvaluationKeySet(params, std::move(bsk), std::move(ksk)); });
}

}  // namespace velopir::boot
