#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "velopir/data/service.hpp"

namespace velopir::data {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode : std::uint32_t { interval = 0, coordinate = 1, identifier = 2 };

const char* mode_name(Mode m);
/// "interval", "coordinate" or "identifier"; throws std::invalid_argument.
Mode parse_mode(std::string_view s);

/// Public shape of a served database.
struct SessionMeta {
  std::uint32_t M = 0;
  std::uint32_t l_I = 16;
  std::uint32_t l_S = 0;
  std::uint32_t d = 2;
  Mode mode = Mode::interval;

  /// Location words carried per record: 2d, d or 1.
  std::uint32_t location_words() const;
  /// Throws std::invalid_argument.
  void validate() const;
  friend bool operator==(const SessionMeta&, const SessionMeta&) = default;
};

/// Left-closed, right-open box [x_left, x_right) x [y_left, y_right).
struct Interval {
  std::int32_t x_left = 0, x_right = 0, y_left = 0, y_right = 0;
  bool contains(std::int32_t x, std::int32_t y) const {
    return x_left <= x && x < x_right && y_left <= y && y < y_right;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Coordinate {
  std::int32_t x = 0, y = 0;
  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

struct Identifier {
  std::uint32_t index = 0;
  friend bool operator==(const Identifier&, const Identifier&) = default;
};

using Location = std::variant<Interval, Coordinate, Identifier>;

struct Record {
  Location location;
  ServiceWord service = 0;
  std::string label;
  friend bool operator==(const Record&, const Record&) = default;
};

struct PlainDatabase {
  SessionMeta meta;
  std::vector<Record> records;
};

/// Client-side query in quantized form.
struct PlainQuery {
  Mode mode = Mode::interval;
  std::int32_t x = 0, y = 0;
  std::uint32_t index = 0;

  static PlainQuery point(Mode m, std::int32_t x, std::int32_t y) { return {m, x, y, 0}; }
  static PlainQuery identifier(std::uint32_t idx) { return {Mode::identifier, 0, 0, idx}; }
};

/// Signed range of an l-bit two's-complement word.
std::int64_t signed_min(unsigned l);
std::int64_t signed_max(unsigned l);

/// Degrees -> round-half-away-from-zero(degrees * 100). Throws DataError if
/// |degrees| > 180 or the result leaves the signed l_I-bit range.
std::int32_t quantize_coord(double degrees, unsigned l_I);

/// Pairs (i, j), i < j, of boxes that overlap under [left, right) semantics.
struct DisjointReport {
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  bool ok() const { return violations.empty(); }
};
DisjointReport validate_disjoint(const std::vector<Interval>& boxes);

/// Shape, range, ordering and uniqueness checks. Throws DataError.
void validate_database(const PlainDatabase& db);

/// CSV with a header row:
///   interval:   name,x_left,x_right,y_left,y_right,service
///   coordinate: name,x,y,service
///   identifier: name,service          (index = row order)
/// Coordinates are in degrees. Errors carry the line number.
PlainDatabase load_dataset(const std::filesystem::path& path, Mode mode, unsigned l_I, unsigned l_S);
PlainDatabase parse_dataset(std::istream& in, Mode mode, unsigned l_I, unsigned l_S,
                            std::string_view source = "<input>");

/// Writes the CSV form accepted by load_dataset.
void write_dataset(std::ostream& out, const PlainDatabase& db);
void save_dataset(const std::filesystem::path& path, const PlainDatabase& db);

/// Deterministic dataset of the given shape: disjoint grid boxes, distinct
/// points or dense identifiers, and nonzero random services. Throws
/// DataError when the shape does not fit the coordinate range.
PlainDatabase synth_dataset(std::uint32_t M, unsigned l_I, unsigned l_S, Mode mode, std::uint64_t seed);

/// Linear scan: XOR of the services of every matching record, 0 if none.
ServiceWord reference_retrieve(const PlainDatabase& db, const PlainQuery& q);
/// Indices of matching records.
std::vector<std::size_t> matching_records(const PlainDatabase& db, const PlainQuery& q);

/// Region names with dense indices from 0.
class RegionTable {
 public:
  RegionTable() = default;
  /// Throws DataError on duplicate names.
  explicit RegionTable(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  std::optional<std::uint32_t> index_of(std::string_view name) const;
  const std::string& name_of(std::uint32_t index) const;
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

/// Two-column CSV "name,index" with header; indices must be dense from 0.
RegionTable load_region_table(const std::filesystem::path& path);
RegionTable parse_region_table(std::istream& in, std::string_view source = "<input>");
void write_region_table(std::ostream& out, const RegionTable& t);
/// Labels of an identifier database in index order.
RegionTable region_table_of(const PlainDatabase& db);

/// Published dataset shape and the validation modes it is served with.
struct DatasetShape {
  std::string name;
  std::uint32_t M, l_I, l_S;
  std::vector<Mode> modes;

  SessionMeta meta(Mode mode) const { return SessionMeta{M, l_I, l_S, 2, mode}; }
};

/// covid-kor (9,16,9), covid-usa (58,16,22), gdacs (9,16,16) and
/// weather-usa (304,16,128).
const std::vector<DatasetShape>& dataset_shapes();
/// Throws std::invalid_argument for unknown names.
const DatasetShape& shape_by_name(std::string_view name);

/// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace velopir::data
