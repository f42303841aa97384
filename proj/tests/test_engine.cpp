#include <gtest/gtest.h>

#include <random>

#include "velopir/engine/engine.hpp"

using namespace velopir;
using namespace velopir::boot;
using namespace velopir::engine;
using data::Interval;
using data::PlainDatabase;
using data::PlainQuery;
using data::ServiceWord;

namespace {

using PWord = Word<PlainOracle>;

PWord word(std::int64_t v, unsigned l) {
  PWord w;
  for (bool b : signed_bits(v, l)) w.push_back(plain_bit(b));
  return w;
}

EncryptedLocationEntry<PlainOracle> box(const Interval& b, unsigned l) {
  return {Mode::interval, {word(b.x_left, l), word(b.x_right, l), word(b.y_left, l), word(b.y_right, l)}};
}

EncryptedLocationEntry<PlainOracle> point(std::int64_t x, std::int64_t y, unsigned l) {
  return {Mode::coordinate, {word(x, l), word(y, l)}};
}

// Closed form of the circuit structure: comparator = 1 XOR, l-1 XNOR,
// l MUX; equality = l XNOR, l-1 AND; plus the l_S mask ANDs per record and
// (M-1)*l_S XORs in the fold.
GateCounts expected_counts(const SessionMeta& m) {
  GateCounts c;
  auto add = [&](GateKind k, std::uint64_t n) { c.by_kind[static_cast<std::size_t>(k)] += n; };
  const std::uint64_t l = m.l_I, M = m.M;
  switch (m.mode) {
    case Mode::interval:
      add(GateKind::xor_, M * 4);
      add(GateKind::xnor, M * 4 * (l - 1));
      add(GateKind::mux, M * 4 * l);
      add(GateKind::and_, M * 3);
      break;
    case Mode::coordinate:
      add(GateKind::xnor, M * 2 * l);
      add(GateKind::and_, M * (2 * (l - 1) + 1));
      break;
    case Mode::identifier:
      add(GateKind::xnor, M * l);
      add(GateKind::and_, M * (l - 1));
      break;
  }
  add(GateKind::and_, M * m.l_S);
  add(GateKind::xor_, (M - 1) * m.l_S);
  return c;
}

PlainQuery random_query(const PlainDatabase& db, std::mt19937_64& gen) {
  const auto& m = db.meta;
  const auto lo = data::signed_min(m.l_I), hi = data::signed_max(m.l_I);
  const auto& rec = db.records[gen() % db.records.size()];
  const bool inside = gen() % 4 != 0;
  switch (m.mode) {
    case Mode::interval: {
      if (inside) {
        const auto& b = std::get<Interval>(rec.location);
        return PlainQuery::point(Mode::interval, b.x_left + static_cast<std::int32_t>(gen() % (b.x_right - b.x_left)),
                                 b.y_left + static_cast<std::int32_t>(gen() % (b.y_right - b.y_left)));
      }
      break;
    }
    case Mode::coordinate:
      if (inside) {
        const auto& p = std::get<data::Coordinate>(rec.location);
        return PlainQuery::point(Mode::coordinate, p.x, p.y);
      }
      break;
    case Mode::identifier:
      return PlainQuery::identifier(static_cast<std::uint32_t>(gen() % (std::min<std::uint64_t>(2 * m.M, 1u << m.l_I))));
  }
  std::uniform_int_distribution<std::int64_t> u(lo, hi);
  return PlainQuery::point(m.mode, static_cast<std::int32_t>(u(gen)), static_cast<std::int32_t>(u(gen)));
}

}  // namespace

TEST(Units, ResourceTableForDatasetShapes) {
  struct Row {
    SessionMeta meta;
    std::uint64_t large, sum, band;
  };
  const Row rows[] = {
      {{9, 16, 9, 2, Mode::interval}, 9, 40, 9},
      {{58, 16, 22, 2, Mode::interval}, 58, 638, 22},
      {{9, 16, 16, 2, Mode::coordinate}, 9, 72, 16},
      {{304, 16, 128, 2, Mode::identifier}, 304, 19456, 128},
  };
  for (const auto& r : rows) {
    EXPECT_EQ(theoretical_units(r.meta, Stage::large_scale), r.large);
    EXPECT_EQ(theoretical_units(r.meta, Stage::hom_sum), r.sum);
    EXPECT_EQ(theoretical_units(r.meta, Stage::bitwise_and), r.band);
    EXPECT_EQ(theoretical_units(r.meta, Stage::intv), 4u);
    EXPECT_EQ(theoretical_units(r.meta, Stage::cov), 2u);
    EXPECT_EQ(theoretical_units(r.meta, Stage::idm), 1u);
    EXPECT_EQ(theoretical_units(r.meta, Stage::comparator), 16u);
    EXPECT_EQ(theoretical_units(r.meta, Stage::hom_eq), 16u);
  }
}

TEST(Bits, SignedAndUnsigned) {
  for (std::int64_t v = -128; v < 128; ++v) EXPECT_EQ(signed_value(signed_bits(v, 8)), v);
  EXPECT_EQ(signed_bits(-1, 3), (std::vector<bool>{true, true, true}));
  EXPECT_EQ(unsigned_bits(5, 4), (std::vector<bool>{true, false, true, false}));
  EXPECT_THROW(signed_bits(40000, 16), std::out_of_range);
  EXPECT_THROW(signed_bits(-32769, 16), std::out_of_range);
  EXPECT_THROW(unsigned_bits(65536, 16), std::out_of_range);
  EXPECT_NO_THROW(unsigned_bits(65535, 16));
}

TEST(Levels, NamesRoundTrip) {
  for (auto l : kAllLevels) EXPECT_EQ(parse_level(level_name(l)), l);
  EXPECT_EQ(parse_level("Outer+Mid"), OptLevel::outer_mid);
  EXPECT_THROW(parse_level("max"), std::invalid_argument);
}

TEST(IntV, BoundaryCases) {
  PlainOracle g;
  const auto b = box({-10, 20, 100, 200}, 16);
  auto at = [&](std::int64_t x, std::int64_t y) { return intv(g, word(x, 16), word(y, 16), b).value; };
  EXPECT_TRUE(at(-10, 150));
  EXPECT_FALSE(at(20, 150));
  EXPECT_TRUE(at(19, 100));
  EXPECT_FALSE(at(0, 200));
  EXPECT_FALSE(at(-11, 150));
  EXPECT_TRUE(at(19, 199));
}

TEST(IntV, RandomPairsMatchBoxTest) {
  PlainOracle g;
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<int> u(-128, 127);
  for (int t = 0; t < 10000; ++t) {
    Interval b{u(gen), u(gen), u(gen), u(gen)};
    if (b.x_left > b.x_right) std::swap(b.x_left, b.x_right);
    if (b.y_left > b.y_right) std::swap(b.y_left, b.y_right);
    const int x = u(gen), y = u(gen);
    ASSERT_EQ(intv(g, word(x, 8), word(y, 8), box(b, 8)).value, b.contains(x, y));
  }
}

TEST(IntV, GateCountAndConcurrentComparisons) {
  PlainOracle g;
  intv(g, word(3, 16), word(4, 16), box({0, 5, 0, 5}, 16));
  EXPECT_EQ(g.counts().total(), 8u * 16 + 3);
  for (auto level : kAllLevels) {
    PlainOracle h;
    circuits::WorkerPool pool(4);
    EXPECT_TRUE(intv(h, word(3, 16), word(4, 16), box({0, 5, 0, 5}, 16), Schedule{level, Executor(&pool)}).value);
    EXPECT_EQ(h.counts(), g.counts()) << level_name(level);
  }
}

TEST(CoV, ExhaustiveAtWidth4) {
  PlainOracle g;
  for (int x = -8; x < 8; ++x)
    for (int y = -8; y < 8; ++y)
      for (int tx = -8; tx < 8; ++tx)
        for (int ty = -8; ty < 8; ++ty)
          ASSERT_EQ(cov(g, word(x, 4), word(y, 4), point(tx, ty, 4)).value, x == tx && y == ty);
}

TEST(CoV, DocumentedCases) {
  PlainOracle g;
  EXPECT_TRUE(cov(g, word(3757, 16), word(12698, 16), point(3757, 12698, 16)).value);
  EXPECT_FALSE(cov(g, word(3757, 16), word(12699, 16), point(3757, 12698, 16)).value);
  PlainOracle c;
  cov(c, word(1, 16), word(2, 16), point(1, 2, 16));
  EXPECT_EQ(c.counts().total(), 63u);
}

TEST(IdM, EqualityAndCount) {
  auto id = [](std::uint64_t v) {
    PWord w;
    for (bool b : unsigned_bits(v, 16)) w.push_back(plain_bit(b));
    return w;
  };
  PlainOracle g;
  EXPECT_TRUE(idm(g, id(7), {Mode::identifier, {id(7)}}).value);
  EXPECT_FALSE(idm(g, id(3), {Mode::identifier, {id(5)}}).value);
  PlainOracle c, e;
  idm(c, id(3), {Mode::identifier, {id(5)}});
  circuits::hom_eq(e, id(3), id(5));
  EXPECT_EQ(c.counts(), e.counts());
  EXPECT_EQ(c.counts().total(), 31u);
  PlainOracle cv;
  cov(cv, word(1, 16), word(2, 16), point(1, 2, 16));
  EXPECT_EQ(cv.counts()[GateKind::and_] - c.counts()[GateKind::and_], 16u);
}

TEST(Modes, RejectMismatches) {
  PlainOracle g;
  EXPECT_THROW(intv(g, word(0, 16), word(0, 16), point(0, 0, 16)), std::invalid_argument);
  EXPECT_THROW(intv(g, word(0, 8), word(0, 16), box({0, 1, 0, 1}, 16)), std::invalid_argument);
  EXPECT_THROW(cov(g, word(0, 16), word(0, 16), box({0, 1, 0, 1}, 16)), std::invalid_argument);
  const auto db = data::synth_dataset(4, 16, 8, Mode::interval, 1);
  const auto edb = plain_database(db);
  auto q = plain_query(PlainQuery::point(Mode::interval, 0, 0), db.meta);
  q.mode = Mode::coordinate;
  EXPECT_THROW(velopir_eval(g, q, edb), std::invalid_argument);
  auto q2 = plain_query(PlainQuery::point(Mode::interval, 0, 0), db.meta);
  q2.words[1].pop_back();
  EXPECT_THROW(velopir_eval(g, q2, edb), std::invalid_argument);
  auto bad = edb;
  bad.records[2].service.pop_back();
  EXPECT_THROW(velopir_eval(g, plain_query(PlainQuery::point(Mode::interval, 0, 0), db.meta), bad),
               std::invalid_argument);
  EXPECT_THROW(velopir_eval(g, q2, edb, OptimizationConfig{OptLevel::all, 0}), std::invalid_argument);
}

class Retrieval : public ::testing::TestWithParam<Mode> {};

TEST_P(Retrieval, MatchesLinearScan) {
  const Mode mode = GetParam();
  std::mt19937_64 gen(31 + static_cast<int>(mode));
  int hits = 0;
  for (int t = 0; t < 120; ++t) {
    const std::uint32_t M = 1 + static_cast<std::uint32_t>(gen() % 24);
    const unsigned l_I = mode == Mode::identifier ? 8 : 10;
    const unsigned l_S = 1 + static_cast<unsigned>(gen() % 40);
    const auto db = data::synth_dataset(M, l_I, l_S, mode, gen());
    const auto q = random_query(db, gen);
    PlainOracle g;
    const auto level = kAllLevels[gen() % 4];
    const auto out = plain_value(velopir_eval(g, plain_query(q, db.meta), plain_database(db),
                                              OptimizationConfig{level, 1 + gen() % 4}));
    const ServiceWord want = data::reference_retrieve(db, q);
    ASSERT_EQ(out, want) << "trial " << t;
    hits += want != 0;
    EXPECT_EQ(g.counts(), expected_counts(db.meta));
  }
  EXPECT_GT(hits, 40);
}

INSTANTIATE_TEST_SUITE_P(AllModes, Retrieval,
                         ::testing::Values(Mode::interval, Mode::coordinate, Mode::identifier),
                         [](const auto& info) { return std::string(data::mode_name(info.param)); });

TEST(Eval, CovidKorShapeEveryRegionAndOutside) {
  const auto db = data::synth_dataset(9, 16, 9, Mode::interval, 3);
  const auto edb = plain_database(db);
  PlainOracle g;
  for (const auto& r : db.records) {
    const auto& b = std::get<Interval>(r.location);
    EXPECT_EQ(plain_value(velopir_eval(g, plain_query(PlainQuery::point(Mode::interval, b.x_left, b.y_left), db.meta),
                                       edb)),
              r.service);
  }
  EXPECT_EQ(plain_value(velopir_eval(g, plain_query(PlainQuery::point(Mode::interval, 32767, 32767), db.meta), edb)),
            0u);
}

TEST(Eval, OverlappingRecordsXorTogether) {
  PlainDatabase db;
  db.meta = {3, 16, 8, 2, Mode::interval};
  db.records = {{Interval{0, 10, 0, 10}, 0b1100, "a"}, {Interval{5, 15, 5, 15}, 0b1010, "b"},
                {Interval{20, 30, 20, 30}, 0b0001, "c"}};
  PlainOracle g;
  const auto out = velopir_eval(g, plain_query(PlainQuery::point(Mode::interval, 7, 7), db.meta), plain_database(db));
  EXPECT_EQ(plain_value(out), ServiceWord{0b0110});
}

TEST(Transparency, LevelsAndWorkerCounts) {
  for (auto [mode, M, l_S] : {std::tuple{Mode::interval, 9u, 9u}, {Mode::coordinate, 9u, 16u},
                              {Mode::identifier, 58u, 22u}}) {
    const auto db = data::synth_dataset(M, 16, l_S, mode, 12);
    const auto edb = plain_database(db);
    std::mt19937_64 gen(13);
    for (int t = 0; t < 4; ++t) {
      const auto q = plain_query(random_query(db, gen), db.meta);
      std::optional<std::vector<bool>> first;
      std::optional<GateCounts> counts;
      for (auto level : kAllLevels)
        for (std::size_t n_p : {1u, 2u, 4u, 8u}) {
          PlainOracle g;
          const auto out = velopir_eval(g, q, edb, OptimizationConfig{level, n_p});
          std::vector<bool> bits;
          for (const auto& b : out) bits.push_back(b.value);
          if (!first) first = bits, counts = g.counts();
          EXPECT_EQ(bits, *first) << level_name(level) << " n_p=" << n_p;
          EXPECT_EQ(g.counts(), *counts) << level_name(level) << " n_p=" << n_p;
        }
    }
  }
}

TEST(Depth, InnerLevelShortensCriticalPath) {
  const auto db = data::synth_dataset(16, 16, 8, Mode::coordinate, 4);
  const auto edb = plain_database(db);
  const auto q = plain_query(PlainQuery::point(Mode::coordinate, 0, 0), db.meta);
  PlainOracle serial, inner;
  velopir_eval(serial, q, edb, OptimizationConfig{OptLevel::none, 1});
  velopir_eval(inner, q, edb, OptimizationConfig{OptLevel::all, 1});
  // hom_eq chain l, then AND, mask, and an M-1 or log2 M deep fold.
  EXPECT_EQ(serial.max_depth(), 16u + 1 + 1 + 15);
  EXPECT_EQ(inner.max_depth(), 1u + 4 + 1 + 1 + 4);
}

class TfheEngine : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    Entropy e = Entropy::seeded(600);
    keys_ = new KeyBundle(generate_keys(lambda128(), e));
  }
  static void TearDownTestSuite() {
    delete keys_;
    keys_ = nullptr;
  }
  static KeyBundle* keys_;
};

KeyBundle* TfheEngine::keys_ = nullptr;

TEST_F(TfheEngine, CovidKorShapeTenQueries) {
  TfheBackend g(keys_->evk);
  Entropy e = Entropy::seeded(601);
  auto enc = [&](bool b) { return tlwe_encrypt(b, keys_->lwe_key, keys_->params.lwe, e); };
  auto dec = [&](const TlweSample& c) { return tlwe_decrypt(c, keys_->lwe_key); };
  const auto db = data::synth_dataset(9, 16, 9, Mode::interval, 602);
  const auto edb = encode_database<TfheBackend>(db, enc);
  std::mt19937_64 gen(603);
  int mismatches = 0;
  for (int t = 0; t < 10; ++t) {
    PlainQuery q;
    if (t == 9) {
      q = PlainQuery::point(Mode::interval, -32768, -32768);
    } else {
      const auto& b = std::get<Interval>(db.records[t].location);
      q = PlainQuery::point(Mode::interval, b.x_left + static_cast<std::int32_t>(gen() % (b.x_right - b.x_left)),
                            b.y_left + static_cast<std::int32_t>(gen() % (b.y_right - b.y_left)));
    }
    const auto level = kAllLevels[t % 4];
    const auto out = velopir_eval(g, encode_query<TfheBackend>(q, db.meta, enc), edb, OptimizationConfig{level, 2});
    mismatches += decode_word(out, dec) != data::reference_retrieve(db, q);
  }
  EXPECT_EQ(mismatches, 0);
}
