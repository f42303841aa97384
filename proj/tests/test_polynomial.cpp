#include <gtest/gtest.h>

#include "velopir/boot/polynomial.hpp"
#include "velopir/torus/entropy.hpp"

using namespace velopir;
using namespace velopir::boot;

namespace {

IntPolynomial random_small(std::size_t n, std::int32_t bound, Entropy& e) {
  IntPolynomial p(n);
  for (auto& c : p) c = static_cast<std::int32_t>(e.next_u32() % (2 * bound)) - bound;
  return p;
}

TorusPolynomial random_torus(std::size_t n, Entropy& e) {
  TorusPolynomial p(n);
  for (auto& c : p) c = Torus(e.next_u32());
  return p;
}

IntPolynomial monomial(std::size_t n, std::uint32_t e) {
  IntPolynomial p(n, 0);
  e %= 2 * n;
  if (e < n)
    p[e] = 1;
  else
    p[e - n] = -1;
  return p;
}

}  // namespace

TEST(NegacyclicFft, MatchesSchoolbookExactlyUpTo64) {
  Entropy e = Entropy::seeded(11);
  for (std::size_t n = 2; n <= 64; n *= 2) {
    for (int trial = 0; trial < 20; ++trial) {
      auto a = random_small(n, 64, e);
      auto b = random_torus(n, e);
      EXPECT_EQ(negacyclic_mul(a, b), negacyclic_mul_exact(a, b)) << "N=" << n;
    }
  }
}

TEST(NegacyclicFft, MatchesSchoolbookAtRingSize) {
  Entropy e = Entropy::seeded(12);
  for (int trial = 0; trial < 5; ++trial) {
    auto digits = random_small(1024, 64, e);
    auto b = random_torus(1024, e);
    EXPECT_EQ(negacyclic_mul(digits, b), negacyclic_mul_exact(digits, b));
    IntPolynomial key(1024);
    for (auto& c : key) c = static_cast<std::int32_t>(e.next_u32() & 1);
    EXPECT_EQ(negacyclic_mul(key, b), negacyclic_mul_exact(key, b));
  }
}

TEST(NegacyclicFft, SchoolbookWrapsWithNegation) {
  // X^(N-1) * X = X^N = -1
  const std::size_t n = 8;
  TorusPolynomial b(n);
  b[n - 1] = Torus(5);
  IntPolynomial x(n, 0);
  x[1] = 1;
  auto r = negacyclic_mul_exact(x, b);
  EXPECT_EQ(r[0], -Torus(5));
  for (std::size_t i = 1; i < n; ++i) EXPECT_EQ(r[i], Torus(0));
}

TEST(NegacyclicFft, RejectsBadSizes) {
  EXPECT_THROW(NegacyclicFft::of(12), std::invalid_argument);
  IntPolynomial a(8);
  TorusPolynomial b(16);
  EXPECT_THROW(negacyclic_mul_exact(a, b), std::invalid_argument);
}

TEST(Monomial, AgreesWithSchoolbook) {
  Entropy e = Entropy::seeded(13);
  const std::size_t n = 32;
  auto p = random_torus(n, e);
  TorusPolynomial out(n);
  for (std::uint32_t k = 0; k < 4 * n; ++k) {
    mul_by_monomial(p, k, out);
    EXPECT_EQ(out, negacyclic_mul_exact(monomial(n, k), p)) << "exponent " << k;
  }
}

TEST(Monomial, ExponentsCompose) {
  Entropy e = Entropy::seeded(14);
  const std::size_t n = 64;
  auto p = random_torus(n, e);
  TorusPolynomial t1(n), t2(n), direct(n);
  for (int trial = 0; trial < 50; ++trial) {
    std::uint32_t a = e.next_u32() % (2 * n), b = e.next_u32() % (2 * n);
    mul_by_monomial(p, a, t1);
    mul_by_monomial(t1, b, t2);
    mul_by_monomial(p, a + b, direct);
    EXPECT_EQ(t2, direct);
  }
  mul_by_monomial(p, 2 * n, t1);
  EXPECT_EQ(t1, p);
}
