#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>

namespace velopir {

/// Randomness source for key generation, encryption and noise.
///
/// Two modes exist. A seeded source is a deterministic Mersenne Twister
/// stream, used by tests and benchmarks so that keys and ciphertexts are
/// reproducible bit for bit. A system source reads the kernel CSPRNG
/// (getrandom) through a small buffer and is the default for real keys.
///
/// An Entropy object is not thread-safe; give each worker its own stream
/// via fork().
class Entropy {
 public:
  static Entropy seeded(std::uint64_t seed);
  static Entropy system();

  bool is_seeded() const { return seeded_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform double in the open interval (0, 1).
  double next_open_unit();

  /// Independent child stream. Deterministic for seeded sources.
  Entropy fork(std::uint64_t stream_id);

 private:
  explicit Entropy(bool seeded) : seeded_(seeded) {}

  void refill();

  bool seeded_;
  std::mt19937_64 engine_;
  std::array<std::uint64_t, 64> buffer_{};
  std::size_t buffer_pos_ = 64;
};

}  // namespace velopir
