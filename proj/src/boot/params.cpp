#include "velopir/boot/params.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace velopir::boot {

void RingParams::validate() const {
  if (N < 2 || !std::has_single_bit(N)) throw std::invalid_argument("N must be a power of two >= 2");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (bk_base_log < 1 || bk_levels < 1 || bk_base_log * bk_levels > 32)
    throw std::invalid_argument("bootstrapping gadget must fit in 32 bits");
  if (ks_base_log < 1 || ks_levels < 1 || ks_base_log * ks_levels > 32)
    throw std::invalid_argument("key-switching gadget must fit in 32 bits");
  if (!(sigma_bk > 0 && sigma_bk < 1.0 / 16) || !(sigma_ks > 0 && sigma_ks < 1.0 / 16))
    throw std::invalid_argument("noise deviations must lie in (0, 1/16)");
}

std::uint32_t RingParams::log2_N() const { return static_cast<std::uint32_t>(std::countr_zero(N)); }

ParameterSet lambda128() {
  ParameterSet p;
  p.lwe.n = 630;
  p.lwe.sigma = 0x1.0p-15;
  p.lwe.lambda = 128;
  p.ring = RingParams{};
  return p;
}

ParameterSet preset(std::string_view name) {
  if (name == "lambda128" || name == "default") return lambda128();
  throw std::invalid_argument("unknown parameter preset: " + std::string(name));
}

}  // namespace velopir::boot
