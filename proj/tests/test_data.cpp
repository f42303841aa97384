#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "velopir/data/dataset.hpp"

using namespace velopir::data;

namespace {

PlainDatabase parse(const std::string& text, Mode mode, unsigned l_S = 22) {
  std::istringstream in(text);
  return parse_dataset(in, mode, 16, l_S, "test.csv");
}

std::string bytes_of(const PlainDatabase& db) {
  std::ostringstream out;
  write_dataset(out, db);
  return out.str();
}

std::string error_of(const std::string& text, Mode mode, unsigned l_S = 22) {
  try {
    parse(text, mode, l_S);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Quantize, DocumentedValues) {
  EXPECT_EQ(quantize_coord(126.978, 16), 12698);
  EXPECT_EQ(quantize_coord(-0.005, 16), -1);
  EXPECT_EQ(quantize_coord(0.005, 16), 1);
  EXPECT_EQ(quantize_coord(37.5665, 16), 3757);
  EXPECT_EQ(quantize_coord(-180.0, 16), -18000);
  EXPECT_EQ(quantize_coord(180.0, 16), 18000);
}

TEST(Quantize, RangeErrors) {
  EXPECT_THROW(quantize_coord(180.01, 16), DataError);
  EXPECT_THROW(quantize_coord(-200.0, 16), DataError);
  EXPECT_THROW(quantize_coord(std::nan(""), 16), DataError);
  // 12-bit words hold +-20.47 degrees.
  EXPECT_EQ(quantize_coord(20.47, 12), 2047);
  EXPECT_THROW(quantize_coord(20.48, 12), DataError);
  EXPECT_EQ(quantize_coord(-20.48, 12), -2048);
}

TEST(Quantize, Monotone) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-180.0, 180.0);
  for (int t = 0; t < 100000; ++t) {
    double a = u(gen), b = u(gen);
    if (a > b) std::swap(a, b);
    EXPECT_LE(quantize_coord(a, 16), quantize_coord(b, 16));
    if (b - a > 0.01) {
      EXPECT_LT(quantize_coord(a, 16), quantize_coord(b, 16)) << a << " " << b;
    }
  }
}

TEST(Service, EncodeDecode) {
  EXPECT_EQ(encode_service(5, 4), (std::vector<bool>{true, false, true, false}));
  for (unsigned l = 1; l <= 128; ++l) {
    EXPECT_EQ(encode_service(0, l), std::vector<bool>(l, false));
    EXPECT_EQ(decode_service(encode_service(max_service(l), l)), max_service(l));
    if (l < 128) {
      EXPECT_THROW(encode_service(max_service(l) + 1, l), std::out_of_range) << l;
    }
  }
}

TEST(Service, RoundTripRandomWords) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 10000; ++t) {
    const ServiceWord w = (static_cast<ServiceWord>(gen()) << 64) | gen();
    ASSERT_EQ(decode_service(encode_service(w, 128)), w);
  }
  for (unsigned l = 1; l <= 128; ++l)
    for (int t = 0; t < 50; ++t) {
      const ServiceWord w = ((static_cast<ServiceWord>(gen()) << 64) | gen()) & max_service(l);
      ASSERT_EQ(decode_service(encode_service(w, l)), w);
    }
}

TEST(Service, ParseAndText) {
  EXPECT_EQ(parse_service("302"), ServiceWord{302});
  EXPECT_EQ(parse_service("0xff"), ServiceWord{255});
  EXPECT_EQ(to_string(max_service(128)), "340282366920938463463374607431768211455");
  EXPECT_EQ(parse_service(to_string(max_service(128))), max_service(128));
  EXPECT_THROW(parse_service("12a"), std::invalid_argument);
  EXPECT_THROW(parse_service(""), std::invalid_argument);
  EXPECT_EQ(decode_text(encode_text("sunny 21C", 128)), "sunny 21C");
  EXPECT_THROW(encode_text("seventeen bytes!!", 128), std::out_of_range);
}

TEST(Load, IntervalFile) {
  const auto db = parse(
      "name,x_left,x_right,y_left,y_right,service\n"
      "Seoul,37.40,37.70,126.70,127.20,302\n"
      "\"Busan, port\",35.00,35.30,128.80,129.30,511\n",
      Mode::interval, 9);
  EXPECT_EQ(db.meta.M, 2u);
  EXPECT_EQ(db.meta.l_S, 9u);
  EXPECT_EQ(db.records[0].location, Location(Interval{3740, 3770, 12670, 12720}));
  EXPECT_EQ(db.records[1].label, "Busan, port");
  EXPECT_EQ(db.records[1].service, ServiceWord{511});
  const auto again = parse(bytes_of(db), Mode::interval, 9);
  EXPECT_EQ(again.records, db.records);
}

TEST(Load, OtherModes) {
  const auto cov = parse("name,x,y,service\na,37.5665,126.978,7\nb,-1,-2,8\n", Mode::coordinate);
  EXPECT_EQ(cov.records[0].location, Location(Coordinate{3757, 12698}));
  const auto idm = parse("name,service\nOhio,1\nUtah,2\nIowa,3\n", Mode::identifier, 128);
  ASSERT_EQ(idm.meta.M, 3u);
  EXPECT_EQ(idm.records[2].location, Location(Identifier{2}));
  const auto table = region_table_of(idm);
  EXPECT_EQ(table.index_of("Utah"), 1u);
  EXPECT_FALSE(table.index_of("Maine"));
  std::ostringstream out;
  write_region_table(out, table);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_region_table(in).names(), table.names());
}

TEST(Load, CovidKorShape) {
  std::string text = "name,x_left,x_right,y_left,y_right,service\n";
  for (int i = 0; i < 9; ++i)
    text += "r" + std::to_string(i) + "," + std::to_string(33 + i) + ".0," + std::to_string(33 + i) + ".5,126,129," +
            std::to_string(i == 8 ? 511 : 100 + i) + "\n";
  const auto db = parse(text, Mode::interval, 9);
  EXPECT_EQ(db.meta, (SessionMeta{9, 16, 9, 2, Mode::interval}));
}

TEST(Load, OverlapNamesBothRows) {
  const auto msg = error_of(
      "name,x_left,x_right,y_left,y_right,service\n"
      "alpha,0,10,0,10,1\n"
      "beta,20,30,20,30,2\n"
      "gamma,5,15,5,15,3\n",
      Mode::interval);
  EXPECT_NE(msg.find("alpha"), std::string::npos) << msg;
  EXPECT_NE(msg.find("gamma"), std::string::npos) << msg;
}

TEST(Load, ServiceRange) {
  const std::string text = "name,x,y,service\nr,1,2,3000000\n";
  EXPECT_EQ(parse(text, Mode::coordinate, 22).records[0].service, ServiceWord{3000000});
  const auto msg = error_of(text, Mode::coordinate, 9);
  EXPECT_NE(msg.find("test.csv:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("overflows"), std::string::npos) << msg;
}

TEST(Load, Errors) {
  EXPECT_NE(error_of("name,x,service\nr,1,2\n", Mode::coordinate).find("header"), std::string::npos);
  EXPECT_NE(error_of("name,x,y,service\nr,1,2\n", Mode::coordinate).find("test.csv:2"), std::string::npos);
  EXPECT_NE(error_of("name,x,y,service\nr,1,2,3\n\ns,1,abc,4\n", Mode::coordinate).find("test.csv:4"),
            std::string::npos);
  EXPECT_NE(error_of("name,x,y,service\nr,1,2,3\ns,1,2,4\n", Mode::coordinate).find("duplicate"), std::string::npos);
  EXPECT_NE(error_of("name,x,y,service\nr,1,200,3\n", Mode::coordinate).find("180"), std::string::npos);
  EXPECT_NE(error_of("name,x_left,x_right,y_left,y_right,service\nr,2,1,0,1,3\n", Mode::interval).find("empty"),
            std::string::npos);
  EXPECT_FALSE(error_of("name,service\n", Mode::identifier).empty());
  EXPECT_FALSE(error_of("", Mode::identifier).empty());
  EXPECT_THROW(load_dataset("/nonexistent/file.csv", Mode::interval, 16, 9), DataError);
}

TEST(Disjoint, BoundarySharingIsDisjoint) {
  EXPECT_TRUE(validate_disjoint({{0, 10, 0, 10}, {10, 20, 0, 10}, {0, 10, 10, 20}}).ok());
}

TEST(Disjoint, NestedAndCrossing) {
  auto r = validate_disjoint({{0, 10, 0, 10}, {2, 4, 2, 4}, {20, 30, 20, 30}, {9, 25, 9, 25}});
  std::vector<std::pair<std::size_t, std::size_t>> want = {{0, 1}, {0, 3}, {2, 3}};
  EXPECT_EQ(r.violations, want);
}

TEST(Synth, TableShapes) {
  const auto usa = synth_dataset(58, 16, 22, Mode::interval, 1);
  std::vector<Interval> boxes;
  for (const auto& r : usa.records) {
    boxes.push_back(std::get<Interval>(r.location));
    EXPECT_NE(r.service, 0u);
    EXPECT_TRUE(fits(r.service, 22));
  }
  EXPECT_EQ(boxes.size(), 58u);
  EXPECT_TRUE(validate_disjoint(boxes).ok());

  const auto weather = synth_dataset(304, 16, 128, Mode::identifier, 7);
  std::set<std::uint32_t> ids;
  for (const auto& r : weather.records) ids.insert(std::get<Identifier>(r.location).index);
  EXPECT_EQ(ids.size(), 304u);
  EXPECT_EQ(*ids.rbegin(), 303u);

  for (auto [M, l_S] : {std::pair{9u, 9u}, {9u, 16u}}) {
    const auto db = synth_dataset(M, 16, l_S, Mode::interval, 2);
    EXPECT_EQ(db.meta, (SessionMeta{M, 16, l_S, 2, Mode::interval}));
    validate_database(db);
  }
  validate_database(synth_dataset(58, 16, 22, Mode::coordinate, 3));
}

TEST(Synth, DeterministicBytes) {
  for (auto mode : {Mode::interval, Mode::coordinate, Mode::identifier}) {
    EXPECT_EQ(bytes_of(synth_dataset(58, 16, 22, mode, 9)), bytes_of(synth_dataset(58, 16, 22, mode, 9)));
    EXPECT_NE(bytes_of(synth_dataset(58, 16, 22, mode, 9)), bytes_of(synth_dataset(58, 16, 22, mode, 10)));
  }
}

TEST(Synth, CsvRoundTrip) {
  for (auto mode : {Mode::interval, Mode::coordinate, Mode::identifier}) {
    const auto db = synth_dataset(40, 16, 128, mode, 4);
    const auto back = parse(bytes_of(db), mode, 128);
    EXPECT_EQ(back.records, db.records) << mode_name(mode);
  }
}

TEST(Synth, Infeasible) {
  EXPECT_THROW(synth_dataset(5000, 6, 8, Mode::interval, 1), DataError);
  EXPECT_THROW(synth_dataset(100, 6, 8, Mode::identifier, 1), DataError);
  EXPECT_THROW(synth_dataset(0, 16, 8, Mode::interval, 1), DataError);
}

TEST(Retrieve, ReferenceScan) {
  const auto db = synth_dataset(9, 16, 9, Mode::interval, 5);
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    const auto& b = std::get<Interval>(db.records[i].location);
    EXPECT_EQ(reference_retrieve(db, PlainQuery::point(Mode::interval, b.x_left, b.y_left)), db.records[i].service);
    EXPECT_EQ(reference_retrieve(db, PlainQuery::point(Mode::interval, b.x_right - 1, b.y_right - 1)),
              db.records[i].service);
  }
  EXPECT_EQ(reference_retrieve(db, PlainQuery::point(Mode::interval, 32000, 32000)), 0u);
  EXPECT_THROW(reference_retrieve(db, PlainQuery::identifier(0)), std::invalid_argument);
}

TEST(Meta, ValidateAndModes) {
  EXPECT_EQ((SessionMeta{1, 16, 9, 2, Mode::interval}).location_words(), 4u);
  EXPECT_EQ((SessionMeta{1, 16, 9, 2, Mode::coordinate}).location_words(), 2u);
  EXPECT_EQ((SessionMeta{1, 16, 9, 2, Mode::identifier}).location_words(), 1u);
  EXPECT_THROW((SessionMeta{0, 16, 9, 2, Mode::interval}).validate(), std::invalid_argument);
  EXPECT_THROW((SessionMeta{1, 16, 0, 2, Mode::interval}).validate(), std::invalid_argument);
  EXPECT_THROW((SessionMeta{1, 16, 129, 2, Mode::interval}).validate(), std::invalid_argument);
  EXPECT_THROW((SessionMeta{1, 16, 9, 3, Mode::interval}).validate(), std::invalid_argument);
  EXPECT_EQ(parse_mode("IntV"), Mode::interval);
  EXPECT_EQ(parse_mode("idm"), Mode::identifier);
  EXPECT_THROW(parse_mode("grid"), std::invalid_argument);
}

TEST(Csv, QuotedFields) {
  EXPECT_EQ(split_csv_line(R"(a, "b,c" ,"d""e",)"), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
}

TEST(Shapes, PublishedTable) {
  const auto& kor = shape_by_name("covid-kor");
  EXPECT_EQ(kor.meta(Mode::interval), (SessionMeta{9, 16, 9, 2, Mode::interval}));
  EXPECT_EQ(shape_by_name("covid-usa").M, 58u);
  EXPECT_EQ(shape_by_name("covid-usa").l_S, 22u);
  EXPECT_EQ(shape_by_name("gdacs").l_S, 16u);
  EXPECT_EQ(shape_by_name("weather-usa").M, 304u);
  EXPECT_EQ(shape_by_name("weather-usa").l_S, 128u);
  EXPECT_EQ(dataset_shapes().size(), 4u);
  EXPECT_THROW(shape_by_name("covid-fra"), std::invalid_argument);
  for (const auto& s : dataset_shapes())
    for (auto m : s.modes) validate_database(synth_dataset(s.M, s.l_I, s.l_S, m, 1));
}
