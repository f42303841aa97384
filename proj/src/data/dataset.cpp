#include "velopir/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "velopir/torus/entropy.hpp"

namespace velopir::data {

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double parse_degrees(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: " + s);
  return v;
}

std::string format_degrees(std::int32_t q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", q / 100.0);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const std::vector<std::string>& header_for(Mode m) {
  static const std::vector<std::string> interval = {"name", "x_left", "x_right", "y_left", "y_right", "service"};
  static const std::vector<std::string> coordinate = {"name", "x", "y", "service"};
  static const std::vector<std::string> identifier = {"name", "service"};
  switch (m) {
    case Mode::interval: return interval;
    case Mode::coordinate: return coordinate;
    default: return identifier;
  }
}

bool in_range(std::int64_t v, unsigned l) { return v >= signed_min(l) && v <= signed_max(l); }

}  // namespace

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::interval: return "interval";
    case Mode::coordinate: return "coordinate";
    case Mode::identifier: return "identifier";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  const std::string v = lower(std::string(s));
  if (v == "interval" || v == "intv") return Mode::interval;
  if (v == "coordinate" || v == "cov") return Mode::coordinate;
  if (v == "identifier" || v == "idm") return Mode::identifier;
  throw std::invalid_argument("unknown mode: " + std::string(s));
}

std::uint32_t SessionMeta::location_words() const {
  switch (mode) {
    case Mode::interval: return 2 * d;
    case Mode::coordinate: return d;
    default: return 1;
  }
}

void SessionMeta::validate() const {
  if (M < 1) throw std::invalid_argument("M must be at least 1");
  if (l_I < 2 || l_I > 31) throw std::invalid_argument("l_I must be in 2..31");
  if (l_S < 1 || l_S > 128) throw std::invalid_argument("l_S must be in 1..128");
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (mode != Mode::identifier && d != 2) throw std::invalid_argument("interval and coordinate modes use d = 2");
  if (static_cast<std::uint32_t>(mode) > 2) throw std::invalid_argument("unknown mode");
}

std::int64_t signed_min(unsigned l) { return -(std::int64_t{1} << (l - 1)); }
std::int64_t signed_max(unsigned l) { return (std::int64_t{1} << (l - 1)) - 1; }

std::int32_t quantize_coord(double degrees, unsigned l_I) {
  if (!std::isfinite(degrees) || std::fabs(degrees) > 180.0)
    throw DataError("coordinate " + std::to_string(degrees) + " outside [-180, 180]");
  const double q = std::round(degrees * 100.0);
  if (!in_range(static_cast<std::int64_t>(q), l_I))
    throw DataError("coordinate " + std::to_string(degrees) + " overflows " + std::to_string(l_I) + "-bit range");
  return static_cast<std::int32_t>(q);
}

DisjointReport validate_disjoint(const std::vector<Interval>& boxes) {
  DisjointReport r;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      const auto& a = boxes[i];
      const auto& b = boxes[j];
      if (a.x_left < b.x_right && b.x_left < a.x_right && a.y_left < b.y_right && b.y_left < a.y_right)
        r.violations.emplace_back(i, j);
    }
  return r;
}

void validate_database(const PlainDatabase& db) {
  const SessionMeta& m = db.meta;
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  if (db.records.size() != m.M)
    throw DataError("record count " + std::to_string(db.records.size()) + " disagrees with M = " + std::to_string(m.M));
  std::vector<Interval> boxes;
  std::set<std::pair<std::int32_t, std::int32_t>> points;
  std::set<std::uint32_t> ids;
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    const Record& r = db.records[i];
    const std::string row = "record " + std::to_string(i) + " (" + r.label + "): ";
    if (!fits(r.service, m.l_S))
      throw DataError(row + "service " + to_string(r.service) + " exceeds " + std::to_string(m.l_S) + " bits");
    switch (m.mode) {
      case Mode::interval: {
        const auto* b = std::get_if<Interval>(&r.location);
        if (!b) throw DataError(row + "not an interval record");
        for (auto v : {b->x_left, b->x_right, b->y_left, b->y_right})
          if (!in_range(v, m.l_I)) throw DataError(row + "bound outside the l_I range");
        if (!(b->x_left < b->x_right) || !(b->y_left < b->y_right))
          throw DataError(row + "empty box (need x_left < x_right and y_left < y_right)");
        boxes.push_back(*b);
        break;
      }
      case Mode::coordinate: {
        const auto* p = std::get_if<Coordinate>(&r.location);
        if (!p) throw DataError(row + "not a coordinate record");
        if (!in_range(p->x, m.l_I) || !in_range(p->y, m.l_I)) throw DataError(row + "coordinate outside the l_I range");
        if (!points.emplace(p->x, p->y).second) throw DataError(row + "duplicate coordinate");
        break;
      }
      case Mode::identifier: {
        const auto* id = std::get_if<Identifier>(&r.location);
        if (!id) throw DataError(row + "not an identifier record");
        if (id->index >= (std::uint64_t{1} << m.l_I)) throw DataError(row + "identifier outside the l_I range");
        if (!ids.insert(id->index).second) throw DataError(row + "duplicate identifier");
        break;
      }
    }
  }
  if (m.mode == Mode::interval) {
    auto rep = validate_disjoint(boxes);
    if (!rep.ok()) {
      auto [i, j] = rep.violations.front();
      throw DataError("overlapping boxes: record " + std::to_string(i) + " (" + db.records[i].label +
                      ") and record " + std::to_string(j) + " (" + db.records[j].label + ")");
    }
  }
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

PlainDatabase parse_dataset(std::istream& in, Mode mode, unsigned l_I, unsigned l_S, std::string_view source) {
  PlainDatabase db;
  db.meta.mode = mode;
  db.meta.l_I = l_I;
  db.meta.l_S = l_S;
  db.meta.d = 2;
  const auto& header = header_for(mode);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      for (auto& f : fields) f = lower(f);
      if (fields != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw DataError(where(source, lineno) + "expected header '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size())
      throw DataError(where(source, lineno) + "expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    Record r;
    r.label = fields[0];
    try {
      switch (mode) {
        case Mode::interval:
          r.location = Interval{quantize_coord(parse_degrees(fields[1]), l_I), quantize_coord(parse_degrees(fields[2]), l_I),
                                quantize_coord(parse_degrees(fields[3]), l_I), quantize_coord(parse_degrees(fields[4]), l_I)};
          break;
        case Mode::coordinate:
          r.location = Coordinate{quantize_coord(parse_degrees(fields[1]), l_I), quantize_coord(parse_degrees(fields[2]), l_I)};
          break;
        case Mode::identifier:
          r.location = Identifier{static_cast<std::uint32_t>(db.records.size())};
          break;
      }
      r.service = parse_service(fields.back());
    } catch (const DataError& e) {
      throw DataError(where(source, lineno) + e.what());
    } catch (const std::exception& e) {
      throw DataError(where(source, lineno) + e.what());
    }
    if (!fits(r.service, l_S))
      throw DataError(where(source, lineno) + "service " + fields.back() + " overflows " + std::to_string(l_S) + " bits");
    db.records.push_back(std::move(r));
  }
  if (!have_header) throw DataError(std::string(source) + ": missing header row");
  if (db.records.empty()) throw DataError(std::string(source) + ": no records");
  db.meta.M = static_cast<std::uint32_t>(db.records.size());
  try {
    validate_database(db);
  } catch (const DataError& e) {
    throw DataError(std::string(source) + ": " + e.what());
  }
  return db;
}

PlainDatabase load_dataset(const std::filesystem::path& path, Mode mode, unsigned l_I, unsigned l_S) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_dataset(in, mode, l_I, l_S, path.string());
}

void write_dataset(std::ostream& out, const PlainDatabase& db) {
  const auto& header = header_for(db.meta.mode);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& r : db.records) {
    out << quote(r.label);
    if (const auto* b = std::get_if<Interval>(&r.location)) {
      out << "," << format_degrees(b->x_left) << "," << format_degrees(b->x_right) << ","
          << format_degrees(b->y_left) << "," << format_degrees(b->y_right);
    } else if (const auto* p = std::get_if<Coordinate>(&r.location)) {
      out << "," << format_degrees(p->x) << "," << format_degrees(p->y);
    }
    out << "," << to_string(r.service) << "\n";
  }
}

void save_dataset(const std::filesystem::path& path, const PlainDatabase& db) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_dataset(out, db);
  if (!out) throw DataError("write failed: " + path.string());
}

PlainDatabase synth_dataset(std::uint32_t M, unsigned l_I, unsigned l_S, Mode mode, std::uint64_t seed) {
  PlainDatabase db;
  db.meta = SessionMeta{M, l_I, l_S, 2, mode};
  try {
    db.meta.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  Entropy rng = Entropy::seeded(seed);
  auto below = [&](std::uint64_t n) { return rng.next_u64() % n; };

  // Latitude on x, longitude on y, clipped to the word range.
  const std::int64_t hx = std::min<std::int64_t>(9000, signed_max(l_I));
  const std::int64_t hy = std::min<std::int64_t>(18000, signed_max(l_I));

  const ServiceWord mask = max_service(l_S);
  auto service = [&] {
    for (;;) {
      ServiceWord w = (static_cast<ServiceWord>(rng.next_u64()) << 64) | rng.next_u64();
      w &= mask;
      if (w != 0) return w;
    }
  };

  db.records.resize(M);
  switch (mode) {
    case Mode::interval: {
      const auto cols = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(M))));
      const std::uint64_t rows = (M + cols - 1) / cols;
      const std::int64_t cw_x = (2 * hx + 1) / static_cast<std::int64_t>(rows);
      const std::int64_t cw_y = (2 * hy + 1) / static_cast<std::int64_t>(cols);
      if (cw_x < 2 || cw_y < 2)
        throw DataError("cannot place " + std::to_string(M) + " disjoint boxes in a " + std::to_string(l_I) + "-bit grid");
      std::vector<std::uint64_t> cells(rows * cols);
      for (std::uint64_t i = 0; i < cells.size(); ++i) cells[i] = i;
      for (std::uint64_t i = cells.size() - 1; i > 0; --i) std::swap(cells[i], cells[below(i + 1)]);
      for (std::uint32_t i = 0; i < M; ++i) {
        const std::int64_t x0 = -hx + static_cast<std::int64_t>(cells[i] / cols) * cw_x;
        const std::int64_t y0 = -hy + static_cast<std::int64_t>(cells[i] % cols) * cw_y;
        const std::int64_t xl = x0 + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(cw_x / 2)));
        const std::int64_t xr = xl + 1 + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(x0 + cw_x - xl)));
        const std::int64_t yl = y0 + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(cw_y / 2)));
        const std::int64_t yr = yl + 1 + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(y0 + cw_y - yl)));
        db.records[i].location = Interval{static_cast<std::int32_t>(xl), static_cast<std::int32_t>(xr),
                                          static_cast<std::int32_t>(yl), static_cast<std::int32_t>(yr)};
      }
      break;
    }
    case Mode::coordinate: {
      const auto span_x = static_cast<std::uint64_t>(2 * hx + 1), span_y = static_cast<std::uint64_t>(2 * hy + 1);
      if (span_x * span_y < M) throw DataError("too many distinct points for the grid");
      std::set<std::pair<std::int32_t, std::int32_t>> seen;
      for (std::uint32_t i = 0; i < M; ++i) {
        std::pair<std::int32_t, std::int32_t> p;
        do {
          p = {static_cast<std::int32_t>(-hx + static_cast<std::int64_t>(below(span_x))),
               static_cast<std::int32_t>(-hy + static_cast<std::int64_t>(below(span_y)))};
        } while (!seen.insert(p).second);
        db.records[i].location = Coordinate{p.first, p.second};
      }
      break;
    }
    case Mode::identifier:
      if (M > (std::uint64_t{1} << l_I)) throw DataError("too many identifiers for l_I bits");
      for (std::uint32_t i = 0; i < M; ++i) db.records[i].location = Identifier{i};
      break;
  }
  for (std::uint32_t i = 0; i < M; ++i) {
    db.records[i].service = service();
    db.records[i].label = "region-" + std::to_string(i);
  }
  validate_database(db);
  return db;
}

std::vector<std::size_t> matching_records(const PlainDatabase& db, const PlainQuery& q) {
  if (q.mode != db.meta.mode) throw std::invalid_argument("query mode does not match the database");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    const Location& loc = db.records[i].location;
    bool hit = false;
    if (const auto* b = std::get_if<Interval>(&loc)) hit = b->contains(q.x, q.y);
    else if (const auto* p = std::get_if<Coordinate>(&loc)) hit = p->x == q.x && p->y == q.y;
    else if (const auto* id = std::get_if<Identifier>(&loc)) hit = id->index == q.index;
    if (hit) out.push_back(i);
  }
  return out;
}

ServiceWord reference_retrieve(const PlainDatabase& db, const PlainQuery& q) {
  ServiceWord w = 0;
  for (auto i : matching_records(db, q)) w ^= db.records[i].service;
  return w;
}

RegionTable::RegionTable(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string_view> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw DataError("duplicate region name: " + n);
}

std::optional<std::uint32_t> RegionTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

const std::string& RegionTable::name_of(std::uint32_t index) const {
  if (index >= names_.size()) throw std::out_of_range("region index " + std::to_string(index) + " out of range");
  return names_[index];
}

RegionTable parse_region_table(std::istream& in, std::string_view source) {
  std::vector<std::pair<std::uint32_t, std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (!have_header) {
      for (auto& x : f) x = lower(x);
      if (f != std::vector<std::string>{"name", "index"})
        throw DataError(where(source, lineno) + "expected header 'name,index'");
      have_header = true;
      continue;
    }
    if (f.size() != 2) throw DataError(where(source, lineno) + "expected 2 fields");
    try {
      std::size_t pos = 0;
      unsigned long v = std::stoul(f[1], &pos);
      if (pos != f[1].size()) throw std::invalid_argument("bad index");
      rows.emplace_back(static_cast<std::uint32_t>(v), f[0]);
    } catch (const std::exception&) {
      throw DataError(where(source, lineno) + "bad index '" + f[1] + "'");
    }
  }
  if (!have_header) throw DataError(std::string(source) + ": missing header row");
  std::sort(rows.begin(), rows.end());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != i) throw DataError(std::string(source) + ": indices must be dense from 0");
    names.push_back(rows[i].second);
  }
  return RegionTable(std::move(names));
}

RegionTable load_region_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_region_table(in, path.string());
}

void write_region_table(std::ostream& out, const RegionTable& t) {
  out << "name,index\n";
  for (std::size_t i = 0; i < t.size(); ++i) out << quote(t.names()[i]) << "," << i << "\n";
}

RegionTable region_table_of(const PlainDatabase& db) {
  if (db.meta.mode != Mode::identifier) throw DataError("region tables come from identifier databases");
  std::vector<std::string> names(db.records.size());
  for (const auto& r : db.records) names.at(std::get<Identifier>(r.location).index) = r.label;
  return RegionTable(std::move(names));
}

const std::vector<DatasetShape>& dataset_shapes() {
  static const std::vector<DatasetShape> shapes = {
      {"covid-kor", 9, 16, 9, {Mode::interval, Mode::identifier}},
      {"covid-usa", 58, 16, 22, {Mode::interval, Mode::identifier}},
      {"gdacs", 9, 16, 16, {Mode::coordinate}},
      {"weather-usa", 304, 16, 128, {Mode::identifier}},
  };
  return shapes;
}

const DatasetShape& shape_by_name(std::string_view name) {
  for (const auto& s : dataset_shapes())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown dataset shape: " + std::string(name));
}

}  // namespace velopir::data
