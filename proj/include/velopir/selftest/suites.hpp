#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace velopir::selftest {

struct SuiteOptions {
  /// Run the TFHE-backend parts.
  bool tfhe = true;
  /// Include the long TFHE runs: the weather-usa spot check and the
  /// speedup measurement.
  bool heavy = true;
  /// Load keys from here instead of generating seeded ones.
  std::optional<std::filesystem::path> keys_dir;
  std::uint64_t seed = 2024;
};

struct SuiteResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

inline constexpr int kCriteria = 8;
const char* criterion_name(int n);

/// Runs one acceptance criterion. Exceptions become failed results.
SuiteResult run_criterion(int n, const SuiteOptions& opt);

/// "PASS criterion N (name): detail [12.3 s]".
std::string format_result(const SuiteResult& r);

}  // namespace velopir::selftest
