#include <gtest/gtest.h>

#include <atomic>
#include <bit>
#include <chrono>
#include <thread>

#include "velopir/circuits/circuits.hpp"

using namespace velopir;
using namespace velopir::boot;
using namespace velopir::circuits;

namespace {

using PWord = Word<PlainOracle>;

PWord plain_word(std::int64_t v, std::size_t l) {
  PWord w(l);
  for (std::size_t i = 0; i < l; ++i) w[i] = PlainBit{((static_cast<std::uint64_t>(v) >> i) & 1) != 0, 0};
  return w;
}

std::uint64_t plain_value(const PWord& w) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < w.size(); ++i) v |= std::uint64_t{w[i].value} << i;
  return v;
}

std::uint32_t ceil_log2(std::size_t l) { return l <= 1 ? 0 : std::bit_width(l - 1); }

}  // namespace

TEST(WorkerPool, EveryIndexRunsOnce) {
  for (std::size_t workers : {1u, 2u, 4u, 8u}) {
    WorkerPool pool(workers);
    EXPECT_EQ(pool.size(), workers);
    std::vector<std::atomic<int>> hits(1000);
    pool.parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(WorkerPool, NestedRangesComplete) {
  WorkerPool pool(4);
  std::atomic<int> leaves{0};
  pool.parallel_for(6, [&](std::size_t) {
    pool.parallel_for(5, [&](std::size_t) {
      pool.parallel_for(4, [&](std::size_t) { leaves.fetch_add(1); });
    });
  });
  EXPECT_EQ(leaves.load(), 6 * 5 * 4);
}

TEST(WorkerPool, UnitLimitIsRespected) {
  WorkerPool pool(8);
  std::atomic<int> active{0}, peak{0};
  pool.parallel_for(64, [&](std::size_t) {
    int now = active.fetch_add(1) + 1;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
    active.fetch_sub(1);
  }, 3);
  EXPECT_LE(peak.load(), 3);
  EXPECT_GE(peak.load(), 1);
}

TEST(WorkerPool, ExceptionsReachTheCaller) {
  WorkerPool pool(4);
  std::atomic<int> ran{0};
  EXPECT_THROW(pool.parallel_for(50,
                                 [&](std::size_t i) {
                                   ran.fetch_add(1);
                                   if (i == 17) throw std::runtime_error("boom");
                                 }),
               std::runtime_error);
  EXPECT_EQ(ran.load(), 50);
  std::atomic<int> after{0};
  pool.parallel_for(10, [&](std::size_t) { after.fetch_add(1); });
  EXPECT_EQ(after.load(), 10);
}

TEST(Executor, SerialWithoutPool) {
  Executor ex;
  EXPECT_FALSE(ex.parallel());
  std::vector<std::size_t> order;
  ex.run(5, [&](std::size_t i) { order.push_back(i); });
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

class Comparators : public ::testing::TestWithParam<std::size_t> {};

TEST_P(Comparators, ExhaustiveSignedPairs) {
  const std::size_t l = GetParam();
  PlainOracle g;
  WorkerPool pool(4);
  Executor ex(&pool);
  const std::int64_t lo = -(std::int64_t{1} << (l - 1)), hi = (std::int64_t{1} << (l - 1));
  for (std::int64_t a = lo; a < hi; ++a) {
    for (std::int64_t b = lo; b < hi; ++b) {
      auto x = plain_word(a, l), y = plain_word(b, l);
      ASSERT_EQ(hom_comp_le(g, x, y).value, a <= b) << a << " <= " << b;
      ASSERT_EQ(hom_comp_l(g, x, y).value, a < b) << a << " < " << b;
      ASSERT_EQ(hom_eq(g, x, y).value, a == b) << a << " == " << b;
      if ((a ^ b) % 7 == 0) {
        ASSERT_EQ(hom_comp_le_opt(g, x, y, ex).value, a <= b);
        ASSERT_EQ(hom_comp_l_opt(g, x, y, ex).value, a < b);
        ASSERT_EQ(hom_eq_opt(g, x, y, ex).value, a == b);
      }
    }
  }
}

TEST_P(Comparators, ExhaustiveUnsignedEquality) {
  const std::size_t l = GetParam();
  PlainOracle g;
  Executor ex;
  for (std::uint64_t a = 0; a < (1u << l); ++a)
    for (std::uint64_t b = 0; b < (1u << l); ++b) {
      ASSERT_EQ(hom_eq(g, plain_word(a, l), plain_word(b, l)).value, a == b);
      ASSERT_EQ(hom_eq_opt(g, plain_word(a, l), plain_word(b, l), ex).value, a == b);
    }
}

INSTANTIATE_TEST_SUITE_P(Widths, Comparators, ::testing::Range<std::size_t>(2, 9));

TEST(Comparators, DocumentedCases) {
  PlainOracle g;
  EXPECT_TRUE(hom_comp_le(g, plain_word(7, 4), plain_word(7, 4)).value);
  EXPECT_TRUE(hom_comp_le(g, plain_word(-1, 4), plain_word(0, 4)).value);
  EXPECT_FALSE(hom_comp_le(g, plain_word(0, 4), plain_word(-1, 4)).value);
  EXPECT_FALSE(hom_comp_l(g, plain_word(5, 4), plain_word(5, 4)).value);
  EXPECT_TRUE(hom_comp_l(g, plain_word(2, 4), plain_word(3, 4)).value);
  EXPECT_TRUE(hom_eq(g, plain_word(1234, 16), plain_word(1234, 16)).value);
  EXPECT_FALSE(hom_eq(g, plain_word(5, 16), plain_word(5 | 0x8000, 16)).value);
}

TEST(Comparators, RejectBadWidths) {
  PlainOracle g;
  EXPECT_THROW(hom_comp_le(g, plain_word(0, 4), plain_word(0, 5)), std::invalid_argument);
  EXPECT_THROW(hom_comp_l(g, plain_word(0, 1), plain_word(0, 1)), std::invalid_argument);
  EXPECT_THROW(hom_eq(g, plain_word(0, 3), plain_word(0, 2)), std::invalid_argument);
  EXPECT_THROW(hom_eq(g, PWord{}, PWord{}), std::invalid_argument);
  Executor ex;
  EXPECT_THROW(hom_comp_le_opt(g, plain_word(0, 1), plain_word(0, 1), ex), std::invalid_argument);
}

TEST(GateCounts, ComparatorShape) {
  for (std::size_t l : {2u, 5u, 16u}) {
    PlainOracle g;
    auto r = hom_comp_le(g, plain_word(3, l), plain_word(1, l));
    auto c = g.counts();
    EXPECT_EQ(c[GateKind::xor_], 1u);
    EXPECT_EQ(c[GateKind::xnor], l - 1);
    EXPECT_EQ(c[GateKind::mux], l);
    EXPECT_EQ(c.total(), 2 * l);
    // XNOR stage, l-1 ladder MUXes, final MUX.
    EXPECT_EQ(r.depth, 1 + (l - 1) + 1);
  }
}

TEST(GateCounts, OptComparatorMatchesSerial) {
  WorkerPool pool(8);
  Executor ex(&pool);
  PlainOracle a, b;
  auto ra = hom_comp_le(a, plain_word(-300, 16), plain_word(1200, 16));
  auto rb = hom_comp_le_opt(b, plain_word(-300, 16), plain_word(1200, 16), ex);
  EXPECT_EQ(a.counts(), b.counts());
  EXPECT_EQ(ra.depth, rb.depth);
  EXPECT_EQ(a.max_depth(), b.max_depth());
}

TEST(GateCounts, EqualityShapeAndTreeDepth) {
  for (std::size_t l = 1; l <= 16; ++l) {
    PlainOracle s, o;
    Executor ex;
    auto rs = hom_eq(s, plain_word(9, l), plain_word(9, l));
    auto ro = hom_eq_opt(o, plain_word(9, l), plain_word(9, l), ex);
    EXPECT_EQ(s.counts()[GateKind::xnor], l);
    EXPECT_EQ(s.counts()[GateKind::and_], l - 1);
    EXPECT_EQ(s.counts(), o.counts());
    EXPECT_EQ(rs.depth, l);
    // XNOR level plus the AND tree.
    EXPECT_EQ(ro.depth - 1, ceil_log2(l)) << "l=" << l;
  }
  PlainOracle g;
  Executor ex;
  EXPECT_EQ(hom_eq_opt(g, plain_word(1, 16), plain_word(1, 16), ex).depth - 1, 4u);
}

TEST(GateCounts, OracleDepthDefinition) {
  PlainOracle g;
  auto one = g.constant(true);
  auto a = g.and_(one, one);
  EXPECT_EQ(g.and_(a, one).depth, 2u);
  EXPECT_EQ(g.counts().total(), 2u);
  PlainOracle h;
  auto x = h.and_(one, one), y = h.xor_(one, one);
  EXPECT_EQ(x.depth, 1u);
  EXPECT_EQ(y.depth, 1u);
  EXPECT_EQ(h.max_depth(), 1u);
  auto n = h.not_(x);
  EXPECT_EQ(n.depth, 1u);
  EXPECT_EQ(h.counts()[GateKind::not_], 1u);
  EXPECT_EQ(h.counts().total(), 2u);
  h.reset();
  EXPECT_EQ(h.counts().total(), 0u);
}

TEST(BitwiseAnd, MasksWord) {
  PlainOracle g;
  Executor ex;
  auto s = plain_word(0b101101101, 9);
  EXPECT_EQ(plain_value(hom_bitwise_and(g, g.constant(true), s)), 0b101101101u);
  EXPECT_EQ(plain_value(hom_bitwise_and(g, g.constant(false), s)), 0u);
  Entropy e = Entropy::seeded(8);
  WorkerPool pool(4);
  Executor pex(&pool);
  for (int i = 0; i < 100; ++i) {
    bool v = e.next_u32() & 1;
    std::uint64_t w = e.next_u32() & ((1u << 22) - 1);
    PlainBit vb{v, 0};
    EXPECT_EQ(plain_value(hom_bitwise_and(g, vb, plain_word(w, 22))), v ? w : 0);
    EXPECT_EQ(plain_value(hom_bitwise_and_opt(g, vb, plain_word(w, 22), pex)), v ? w : 0);
  }
}

TEST(HomSum, FoldSemantics) {
  PlainOracle g;
  Executor ex;
  std::vector<PWord> one_hot = {plain_word(0, 9), plain_word(0, 9), plain_word(301, 9), plain_word(0, 9)};
  EXPECT_EQ(plain_value(hom_sum(g, one_hot, 9)), 301u);
  EXPECT_EQ(plain_value(hom_sum_opt(g, one_hot, 9, ex)), 301u);
  auto empty = hom_sum(g, std::vector<PWord>{}, 9);
  EXPECT_EQ(empty.size(), 9u);
  EXPECT_EQ(plain_value(empty), 0u);
  EXPECT_EQ(plain_value(hom_sum_opt(g, std::vector<PWord>{}, 9, ex)), 0u);
  std::vector<PWord> two = {plain_word(0b1100, 4), plain_word(0, 4), plain_word(0b1010, 4)};
  EXPECT_EQ(plain_value(hom_sum(g, two, 4)), 0b0110u);
  EXPECT_EQ(plain_value(hom_sum_opt(g, two, 4, ex)), 0b0110u);
  EXPECT_THROW(hom_sum(g, std::vector<PWord>{plain_word(0, 3)}, 4), std::invalid_argument);
}

TEST(HomSum, TreeMatchesSerialForManySizes) {
  Entropy e = Entropy::seeded(9);
  WorkerPool pool(8);
  Executor ex(&pool);
  for (std::size_t m : {1u, 2u, 3u, 9u, 58u, 64u, 65u}) {
    std::vector<PWord> items;
    std::uint64_t expected = 0;
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t w = e.next_u32() & 0x3FFFFF;
      expected ^= w;
      items.push_back(plain_word(w, 22));
    }
    PlainOracle s, o;
    EXPECT_EQ(plain_value(hom_sum(s, items, 22)), expected);
    EXPECT_EQ(plain_value(hom_sum_opt(o, items, 22, ex)), expected);
    EXPECT_EQ(s.counts(), o.counts());
    EXPECT_EQ(s.counts()[GateKind::xor_], (m - 1) * 22);
  }
  // One nonzero among 58.
  std::vector<PWord> items(58, plain_word(0, 22));
  items[41] = plain_word(3000000, 22);
  PlainOracle g;
  EXPECT_EQ(plain_value(hom_sum_opt(g, items, 22, ex)), 3000000u);
}

TEST(Determinism, SameResultForAnyWorkerCount) {
  Entropy e = Entropy::seeded(10);
  std::vector<PWord> items;
  for (int i = 0; i < 9; ++i) items.push_back(plain_word(e.next_u32() & 0xFFFF, 16));
  std::vector<std::uint64_t> outs;
  std::vector<GateCounts> counts;
  for (std::size_t np : {1u, 2u, 4u, 8u}) {
    WorkerPool pool(np);
    Executor ex(&pool);
    PlainOracle g;
    outs.push_back(plain_value(hom_sum_opt(g, items, 16, ex)));
    outs.push_back(hom_eq_opt(g, items[0], items[0], ex).value);
    counts.push_back(g.counts());
  }
  for (std::size_t i = 2; i < outs.size(); i += 2) {
    EXPECT_EQ(outs[i], outs[0]);
    EXPECT_EQ(outs[i + 1], outs[1]);
  }
  for (const auto& c : counts) EXPECT_EQ(c, counts[0]);
}

class TfheCircuits : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    Entropy e = Entropy::seeded(500);
    keys_ = new KeyBundle(generate_keys(lambda128(), e));
  }
  static void TearDownTestSuite() {
    delete keys_;
    keys_ = nullptr;
  }

  static BitVectorCiphertext encrypt(std::int64_t v, std::size_t l, Entropy& e) {
    BitVectorCiphertext w;
    for (std::size_t i = 0; i < l; ++i)
      w.push_back(tlwe_encrypt(((static_cast<std::uint64_t>(v) >> i) & 1) != 0, keys_->lwe_key,
                               keys_->params.lwe, e));
    return w;
  }
  static bool dec(const TlweSample& c) { return tlwe_decrypt(c, keys_->lwe_key); }

  static KeyBundle* keys_;
};

KeyBundle* TfheCircuits::keys_ = nullptr;

TEST_F(TfheCircuits, ComparatorsAgreeWithOracleAtWidth16) {
  TfheBackend g(keys_->evk);
  PlainOracle p;
  WorkerPool pool(4);
  Executor ex(&pool);
  Entropy e = Entropy::seeded(501);
  for (int trial = 0; trial < 6; ++trial) {
    auto a = static_cast<std::int16_t>(e.next_u32());
    auto b = trial % 3 == 0 ? a : static_cast<std::int16_t>(e.next_u32());
    auto x = encrypt(a, 16, e), y = encrypt(b, 16, e);
    auto px = plain_word(a, 16), py = plain_word(b, 16);
    EXPECT_EQ(dec(hom_comp_le(g, x, y)), hom_comp_le(p, px, py).value) << a << " " << b;
    EXPECT_EQ(dec(hom_comp_l_opt(g, x, y, ex)), hom_comp_l(p, px, py).value) << a << " " << b;
    EXPECT_EQ(dec(hom_eq_opt(g, x, y, ex)), hom_eq(p, px, py).value) << a << " " << b;
  }
}

TEST_F(TfheCircuits, ComposedMuxBackendAgrees) {
  TfheBackend g(keys_->evk, MuxMode::composed);
  Entropy e = Entropy::seeded(502);
  for (auto [a, b] : {std::pair{-3, 2}, std::pair{2, -3}, std::pair{1, 1}}) {
    auto x = encrypt(a, 4, e), y = encrypt(b, 4, e);
    EXPECT_EQ(dec(hom_comp_le(g, x, y)), a <= b);
  }
}

TEST_F(TfheCircuits, MaskAndFold) {
  TfheBackend g(keys_->evk);
  Entropy e = Entropy::seeded(503);
  WorkerPool pool(4);
  Executor ex(&pool);
  std::vector<BitVectorCiphertext> items;
  const std::uint64_t words[] = {0x1A5, 0x0F3, 0x111};
  for (int i = 0; i < 3; ++i) {
    auto v = tlwe_encrypt(i == 1, keys_->lwe_key, keys_->params.lwe, e);
    items.push_back(hom_bitwise_and_opt(g, v, encrypt(static_cast<std::int64_t>(words[i]), 9, e), ex));
  }
  auto r = hom_sum_opt(g, items, 9, ex);
  std::uint64_t got = 0;
  for (std::size_t j = 0; j < r.size(); ++j) got |= std::uint64_t{dec(r[j])} << j;
  EXPECT_EQ(got, words[1]);
}
