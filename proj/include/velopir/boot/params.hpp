#pragma once

#include <cstdint>
#include <string_view>

#include "velopir/torus/tlwe.hpp"

namespace velopir::boot {

/// Ring-side parameters of gate bootstrapping.
struct RingParams {
  std::uint32_t N = 1024;  ///< polynomial size, power of two
  std::uint32_t k = 1;     ///< TRLWE mask polynomials
  std::uint32_t bk_base_log = 7;
  std::uint32_t bk_levels = 3;
  std::uint32_t ks_base_log = 2;
  std::uint32_t ks_levels = 8;
  double sigma_bk = 0x1.0p-25;
  double sigma_ks = 0x1.0p-15;

  /// Throws std::invalid_argument on an unusable combination.
  void validate() const;
  std::uint32_t log2_N() const;
  friend bool operator==(const RingParams&, const RingParams&) = default;
};

struct ParameterSet {
  TlweParams lwe;
  RingParams ring;
  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

/// 128-bit security set: n=630, N=1024, k=1, BK (2^7, 3) with sigma 2^-25,
/// KS (2^2, 8) with sigma 2^-15. Fresh level-0 samples use sigma_ks.
ParameterSet lambda128();

/// Looks up a named preset; throws std::invalid_argument for unknown names.
ParameterSet preset(std::string_view name);

}  // namespace velopir::boot
