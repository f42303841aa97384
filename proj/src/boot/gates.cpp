#include "velopir/boot/gates.hpp"

namespace velopir::boot {

namespace {

constexpr Torus kEighth = dyadic(1, 3);
constexpr Torus kQuarter = dyadic(1, 2);

TlweSample affine(Torus offset, std::size_t dim) { return trivial(offset, dim); }

}  // namespace

TlweSample hom_constant(bool value, const EvaluationKeySet& evk) {
  return trivial(encode_bit(value), evk.params().lwe.n);
}

TlweSample hom_not(const TlweSample& a) { return tlwe_neg(a); }

TlweSample hom_and(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk) {
  TlweSample t = affine(-kEighth, a.dimension());
  t += a;
  t += b;
  return bootstrap(t, kEighth, evk);
}

TlweSample hom_or(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk) {
  TlweSample t = affine(kEighth, a.dimension());
  t += a;
  t += b;
  return bootstrap(t, kEighth, evk);
}

TlweSample hom_nand(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk) {
  TlweSample t = affine(kEighth, a.dimension());
  t -= a;
  t -= b;
  return bootstrap(t, kEighth, evk);
}

TlweSample hom_xor(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk) {
  TlweSample s = tlwe_add(a, b);
  s.scale(2);
  TlweSample t = affine(kQuarter, a.dimension());
  t += s;
  return bootstrap(t, kEighth, evk);
}

TlweSample hom_xnor(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk) {
  TlweSample s = tlwe_add(a, b);
  s.scale(2);
  TlweSample t = affine(-kQuarter, a.dimension());
  t -= s;
  return bootstrap(t, kEighth, evk);
}

TlweSample hom_mux(const TlweSample& c, const TlweSample& a, const TlweSample& b,
                   const EvaluationKeySet& evk) {
  const std::size_t n = c.dimension();
  TlweSample t1 = affine(-kEighth, n);
  t1 += c;
  t1 += a;
  TlweSample t2 = affine(-kEighth, n);
  t2 -= c;
  t2 += b;
  TlweSample u1 = bootstrap_without_keyswitch(t1, kEighth, evk);
  const TlweSample u2 = bootstrap_without_keyswitch(t2, kEighth, evk);
  u1 += u2;
  u1 += affine(kEighth, u1.dimension());
  return key_switch(u1, evk.ksk());
}

TlweSample hom_mux_composed(const TlweSample& c, const TlweSample& a, const TlweSample& b,
                            const EvaluationKeySet& evk) {
  return hom_or(hom_and(c, a, evk), hom_and(hom_not(c), b, evk), evk);
}

}  // namespace velopir::boot
