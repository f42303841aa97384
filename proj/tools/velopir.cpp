// velopir: key generation, server, client query, benchmarks and self-test.
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "velopir/protocol/session.hpp"
#include "velopir/selftest/suites.hpp"

namespace fs = std::filesystem;
using namespace velopir;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Entropy entropy_for(const std::optional<std::uint64_t>& seed) {
  return seed ? Entropy::seeded(*seed) : Entropy::system();
}

boot::ParameterSet preset_or_usage(const std::string& name) {
  try {
    return boot::preset(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

data::Mode mode_or_usage(const std::string& name) {
  try {
    return data::parse_mode(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

engine::OptLevel level_or_usage(const std::string& name) {
  try {
    return engine::parse_level(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---- keygen ----------------------------------------------------------

struct KeygenArgs {
  std::string params = "lambda128";
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_keygen(const KeygenArgs& a) {
  const auto params = preset_or_usage(a.params);
  Entropy e = entropy_for(a.seed);
  const auto keys = boot::generate_keys(params, e);
  protocol::save_keys(a.out, keys);
  const protocol::KeyPaths paths(a.out);
  std::cout << "params " << a.params << ": n=" << params.lwe.n << " N=" << params.ring.N << " k=" << params.ring.k
            << "\n";
  for (const auto& p : {paths.params, paths.secret, paths.evk})
    std::cout << p.string() << " " << fs::file_size(p) << " bytes\n";
  return 0;
}

// ---- serve -----------------------------------------------------------

struct ServeArgs {
  std::string db;
  std::string mode;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::string opt = "none";
  std::size_t np = 1;
  unsigned l_I = 16, l_S = 16;
  bool composed_mux = false;
  std::optional<std::uint64_t> seed;
};

int cmd_serve(const ServeArgs& a) {
  auto db = data::load_dataset(a.db, mode_or_usage(a.mode), a.l_I, a.l_S);
  protocol::ServerConfig cfg;
  cfg.host = a.host;
  cfg.port = a.port;
  cfg.opt = {level_or_usage(a.opt), a.np};
  if (cfg.opt.n_p < 1) throw UsageError("--np must be at least 1");
  cfg.mux = a.composed_mux ? boot::MuxMode::composed : boot::MuxMode::native;
  cfg.seed = a.seed;

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);

  protocol::Server server(std::move(db), cfg);
  server.start();
  std::cout << "listening on " << a.host << ":" << server.port() << std::endl;
  int sig = 0;
  sigwait(&stop, &sig);
  spdlog::info("signal {}, shutting down", sig);
  server.stop();
  std::cout << "served " << server.sessions_started() << " sessions, " << server.queries_answered() << " queries"
            << std::endl;
  return 0;
}

// ---- query -----------------------------------------------------------

struct QueryArgs {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::optional<double> lat, lon;
  std::optional<std::string> region;
  std::optional<std::uint32_t> index;
  std::string region_table;
  std::string keys;
  std::optional<std::uint64_t> seed;
};

int cmd_query(const QueryArgs& a) {
  const auto keys = protocol::load_keys(a.keys);
  protocol::Client client(a.host, a.port);
  const auto& meta = client.meta();
  data::PlainQuery q;
  if (meta.mode == data::Mode::identifier) {
    if (a.index) {
      q = data::PlainQuery::identifier(*a.index);
    } else if (a.region) {
      if (a.region_table.empty()) throw UsageError("--region needs --region-table");
      const auto idx = data::load_region_table(a.region_table).index_of(*a.region);
      if (!idx) throw std::runtime_error("unknown region: " + *a.region);
      q = data::PlainQuery::identifier(*idx);
    } else {
      throw UsageError("identifier server: give --region or --index");
    }
  } else {
    if (!a.lat || !a.lon) throw UsageError(std::string(data::mode_name(meta.mode)) + " server: give --lat and --lon");
    q = data::PlainQuery::point(meta.mode, data::quantize_coord(*a.lat, meta.l_I), data::quantize_coord(*a.lon, meta.l_I));
  }
  Entropy e = entropy_for(a.seed);
  client.preprocess(keys, e);
  const auto r = client.query(q, e);
  if (r.matched())
    std::cout << data::to_string(*r.value) << std::endl;
  else
    std::cout << "no match" << std::endl;
  return 0;
}

// ---- synth -----------------------------------------------------------

struct SynthArgs {
  std::string shape;
  std::uint32_t M = 0;
  unsigned l_I = 16, l_S = 16;
  std::string mode = "interval";
  std::uint64_t seed = 1;
  std::string out;
  std::string region_table;
};

int cmd_synth(SynthArgs a) {
  if (!a.shape.empty()) {
    try {
      const auto& s = data::shape_by_name(a.shape);
      a.M = s.M, a.l_I = s.l_I, a.l_S = s.l_S;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (a.M == 0) throw UsageError("give --shape or --records");
  const auto db = data::synth_dataset(a.M, a.l_I, a.l_S, mode_or_usage(a.mode), a.seed);
  data::save_dataset(a.out, db);
  if (!a.region_table.empty()) {
    if (db.meta.mode != data::Mode::identifier) throw UsageError("--region-table needs identifier mode");
    std::ofstream f(a.region_table);
    data::write_region_table(f, data::region_table_of(db));
    if (!f) throw std::runtime_error("cannot write " + a.region_table);
  }
  std::cout << "wrote " << db.records.size() << " " << data::mode_name(db.meta.mode) << " records (l_I=" << a.l_I
            << ", l_S=" << a.l_S << ") to " << a.out << "\n";
  return 0;
}

// ---- bench -----------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> shapes = {"covid-kor", "covid-usa", "gdacs", "weather-usa"};
  std::vector<std::string> modes;
  std::string backend = "plain";
  std::vector<std::string> levels = {"all"};
  std::vector<std::size_t> np = {1, 2, 4, 8};
  std::string keys;
  std::uint64_t seed = 1;
  std::string out;
};

const char* kBenchHeader =
    "dataset,mode,M,l_I,l_S,level,n_p,seconds,speedup,and,or,xor,xnor,mux,not,bootstrapped,correct";

/// Query inside a middle record.
data::PlainQuery bench_query(const data::PlainDatabase& db) {
  const auto& r = db.records[db.records.size() / 2];
  if (const auto* b = std::get_if<data::Interval>(&r.location))
    return data::PlainQuery::point(data::Mode::interval, b->x_left, b->y_left);
  if (const auto* c = std::get_if<data::Coordinate>(&r.location))
    return data::PlainQuery::point(data::Mode::coordinate, c->x, c->y);
  return data::PlainQuery::identifier(std::get<data::Identifier>(r.location).index);
}

int cmd_bench(const BenchArgs& a) {
  if (a.backend != "plain" && a.backend != "tfhe") throw UsageError("--backend must be plain or tfhe");
  const bool tfhe = a.backend == "tfhe";
  std::vector<engine::OptLevel> levels;
  if (a.levels.size() == 1 && a.levels[0] == "all")
    levels.assign(engine::kAllLevels.begin(), engine::kAllLevels.end());
  else
    for (const auto& l : a.levels) levels.push_back(level_or_usage(l));
  for (auto n : a.np)
    if (n < 1) throw UsageError("--np values must be at least 1");
  std::vector<data::Mode> mode_filter;
  for (const auto& m : a.modes) mode_filter.push_back(mode_or_usage(m));

  std::optional<boot::KeyBundle> keys;
  std::optional<boot::TfheBackend> g;
  if (tfhe) {
    if (!a.keys.empty()) {
      keys = protocol::load_keys(a.keys);
    } else {
      Entropy e = Entropy::seeded(a.seed);
      keys = boot::generate_keys(boot::lambda128(), e);
    }
    g.emplace(keys->evk);
  }

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  out << kBenchHeader << "\n";

  for (const auto& shape_name : a.shapes) {
    const data::DatasetShape* shape;
    try {
      shape = &data::shape_by_name(shape_name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    for (auto mode : shape->modes) {
      if (!mode_filter.empty() && std::find(mode_filter.begin(), mode_filter.end(), mode) == mode_filter.end())
        continue;
      const auto db = data::synth_dataset(shape->M, shape->l_I, shape->l_S, mode, a.seed);
      const auto q = bench_query(db);
      const auto want = data::reference_retrieve(db, q);

      std::vector<engine::OptimizationConfig> configs = {{engine::OptLevel::none, 1}};
      for (auto level : levels)
        for (auto n : a.np)
          if (level != engine::OptLevel::none) configs.push_back({level, n});

      const auto pdb = engine::plain_database(db);
      const auto pq = engine::plain_query(q, db.meta);
      std::optional<protocol::TfheDatabase> edb;
      std::optional<protocol::TfheQuery> eq;
      if (tfhe) {
        Entropy e = Entropy::seeded(a.seed + 1);
        auto pk = protocol::pub_key_gen(keys->params.lwe, keys->lwe_key, db.meta, e);
        edb = protocol::server_enc(db, pk);
        eq = protocol::client_encrypt_query(q, keys->lwe_key, keys->params.lwe, db.meta, e);
      }

      double baseline = 0;
      for (const auto& cfg : configs) {
        boot::PlainOracle oracle;
        data::ServiceWord got;
        const auto t0 = std::chrono::steady_clock::now();
        if (tfhe)
          got = protocol::decrypt_word(engine::velopir_eval(*g, *eq, *edb, cfg), keys->lwe_key);
        else
          got = engine::plain_value(engine::velopir_eval(oracle, pq, pdb, cfg));
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (baseline == 0) baseline = t;
        out << shape->name << "," << data::mode_name(mode) << "," << shape->M << "," << shape->l_I << ","
            << shape->l_S << "," << engine::level_name(cfg.level) << "," << cfg.n_p << "," << t << ","
            << (t > 0 ? baseline / t : 0.0);
        if (tfhe) {
          out << ",,,,,,,";
        } else {
          const auto c = oracle.counts();
          for (auto k : {boot::GateKind::and_, boot::GateKind::or_, boot::GateKind::xor_, boot::GateKind::xnor,
                         boot::GateKind::mux, boot::GateKind::not_})
            out << "," << c[k];
          out << "," << c.total();
        }
        out << "," << (got == want ? "yes" : "no") << std::endl;
      }
    }
  }
  return 0;
}

// ---- selftest --------------------------------------------------------

struct SelftestArgs {
  bool quick = false, full = false;
  std::string keys;
  std::uint64_t seed = 2024;
};

int cmd_selftest(const SelftestArgs& a) {
  if (a.quick == a.full) throw UsageError("give exactly one of --quick or --full");
  selftest::SuiteOptions opt;
  opt.tfhe = a.full;
  opt.heavy = false;
  opt.seed = a.seed;
  if (!a.keys.empty()) opt.keys_dir = a.keys;
  const std::vector<int> quick = {1, 3, 4, 6, 8}, full = {1, 2, 3, 4, 6, 7, 8};
  int failed = 0;
  const auto& which = a.full ? full : quick;
  for (int n : which) {
    const auto r = selftest::run_criterion(n, opt);
    std::cout << selftest::format_result(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << which.size() - failed << "/" << which.size() << " suites passed" << std::endl;
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("velopir"));

  CLI::App app{"Location-based private information retrieval over gate-level TFHE"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose", verbose, "log progress to stderr");

  KeygenArgs kg;
  auto* keygen = app.add_subcommand("keygen", "generate a secret key, evaluation key and parameter file");
  keygen->add_option("--params", kg.params, "parameter preset")->capture_default_str();
  keygen->add_option("--out", kg.out, "output directory")->required();
  keygen->add_option("--seed", kg.seed, "deterministic keys (testing only)");

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "serve a plaintext database; stops on SIGINT or SIGTERM");
  serve->add_option("--db", sv.db, "database CSV")->required()->check(CLI::ExistingFile);
  serve->add_option("--mode", sv.mode, "interval, coordinate or identifier")->required();
  serve->add_option("--host", sv.host, "bind address")->capture_default_str();
  serve->add_option("--port", sv.port, "TCP port, 0 picks a free one")->capture_default_str();
  serve->add_option("--opt", sv.opt, "none, outermost, outer+mid or all")->capture_default_str();
  serve->add_option("--np", sv.np, "parallel processing units")->capture_default_str();
  serve->add_option("--l-i", sv.l_I, "location word width")->capture_default_str();
  serve->add_option("--l-s", sv.l_S, "service word width")->capture_default_str();
  serve->add_flag("--composed-mux", sv.composed_mux, "MUX as (c AND a) OR (NOT c AND b)");
  serve->add_option("--seed", sv.seed, "deterministic session ids (testing only)");

  QueryArgs qa;
  auto* query = app.add_subcommand("query", "run one session and one query against a server");
  query->add_option("--host", qa.host, "server address")->capture_default_str();
  query->add_option("--port", qa.port, "server port")->required();
  auto* lat = query->add_option("--lat", qa.lat, "latitude in degrees");
  auto* lon = query->add_option("--lon", qa.lon, "longitude in degrees");
  lat->needs(lon);
  lon->needs(lat);
  auto* region = query->add_option("--region", qa.region, "region name (identifier mode)");
  auto* index = query->add_option("--index", qa.index, "region index (identifier mode)");
  region->excludes(lat)->excludes(index);
  index->excludes(lat);
  query->add_option("--region-table", qa.region_table, "name,index CSV for --region")->check(CLI::ExistingFile);
  query->add_option("--keys", qa.keys, "key directory from keygen")->required()->check(CLI::ExistingDirectory);
  query->add_option("--seed", qa.seed, "deterministic encryption (testing only)");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "write a synthetic database CSV");
  synth->add_option("--shape", sy.shape, "covid-kor, covid-usa, gdacs or weather-usa");
  synth->add_option("--records", sy.M, "record count when no --shape is given");
  synth->add_option("--l-i", sy.l_I, "location word width")->capture_default_str();
  synth->add_option("--l-s", sy.l_S, "service word width")->capture_default_str();
  synth->add_option("--mode", sy.mode, "interval, coordinate or identifier")->capture_default_str();
  synth->add_option("--seed", sy.seed, "generator seed")->capture_default_str();
  synth->add_option("--out", sy.out, "output CSV")->required();
  synth->add_option("--region-table", sy.region_table, "also write the name,index table (identifier mode)");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "time velopir_eval per shape, mode, level and n_p");
  bench->footer(std::string("CSV columns: ") + kBenchHeader +
                "\n  speedup is relative to the level=none, n_p=1 row of the same dataset and mode."
                "\n  Gate-count columns are filled for the plain backend only."
                "\n  --levels all expands to every level.");
  bench->add_option("--shapes", bn.shapes, "dataset shapes")->delimiter(',')->capture_default_str();
  bench->add_option("--modes", bn.modes, "restrict to these modes")->delimiter(',');
  bench->add_option("--backend", bn.backend, "plain or tfhe")->capture_default_str();
  bench->add_option("--levels", bn.levels, "optimization levels")->delimiter(',')->capture_default_str();
  bench->add_option("--np", bn.np, "parallel processing units")->delimiter(',')->capture_default_str();
  bench->add_option("--keys", bn.keys, "key directory (tfhe backend); seeded keys otherwise");
  bench->add_option("--seed", bn.seed, "dataset and key seed")->capture_default_str();
  bench->add_option("--out", bn.out, "CSV output file (default stdout)");

  SelftestArgs st;
  auto* self = app.add_subcommand("selftest", "run the built-in acceptance suites");
  self->add_flag("--quick", st.quick, "cleartext-oracle suites");
  self->add_flag("--full", st.full, "add the TFHE-backend suites");
  self->add_option("--keys", st.keys, "use keys from this directory")->check(CLI::ExistingDirectory);
  self->add_option("--seed", st.seed, "seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);
  if (serve->parsed()) spdlog::set_level(spdlog::level::info);

  try {
    if (keygen->parsed()) return cmd_keygen(kg);
    if (serve->parsed()) return cmd_serve(sv);
    if (query->parsed()) return cmd_query(qa);
    if (synth->parsed()) return cmd_synth(sy);
    if (bench->parsed()) return cmd_bench(bn);
    if (self->parsed()) return cmd_selftest(st);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
