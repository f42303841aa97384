// One PASS/FAIL line per acceptance criterion. Exit status 0 when every
// criterion that ran passed.
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <iostream>

#include "velopir/selftest/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"velopir acceptance checks"};
  std::vector<int> criteria;
  std::string keys;
  bool verbose = false;
  std::uint64_t seed = 2024;
  app.add_option("--criterion,-c", criteria, "criteria to run (default: all)")->check(CLI::Range(1, 8));
  app.add_option("--keys", keys, "key directory from `velopir keygen`");
  app.add_option("--seed", seed, "seed for keys and data");
  app.add_flag("--verbose,-v", verbose, "log progress to stderr");
  CLI11_PARSE(app, argc, argv);

  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);
  if (criteria.empty())
    for (int n = 1; n <= velopir::selftest::kCriteria; ++n) criteria.push_back(n);

  velopir::selftest::SuiteOptions opt;
  opt.seed = seed;
  if (!keys.empty()) opt.keys_dir = keys;
  int failed = 0;
  for (int n : criteria) {
    const auto r = velopir::selftest::run_criterion(n, opt);
    std::cout << velopir::selftest::format_result(r) << std::endl;
    failed += !r.passed;
  }
  return failed ? 1 : 0;
}
