#include "velopir/torus/entropy.hpp"

#include <sys/random.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <string>

namespace velopir {

Entropy Entropy::seeded(std::uint64_t seed) {
  Entropy e(true);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  e.engine_.seed(seq);
  return e;
}

Entropy Entropy::system() { return Entropy(false); }

void Entropy::refill() {
  auto* out = reinterpret_cast<unsigned char*>(buffer_.data());
  std::size_t want = sizeof(buffer_);
  std::size_t got = 0;
  while (got < want) {
    ssize_t r = ::getrandom(out + got, want - got, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("getrandom failed: ") + std::strerror(errno));
    }
    got += static_cast<std::size_t>(r);
  }
  buffer_pos_ = 0;
}

std::uint64_t Entropy::next_u64() {
  if (seeded_) return engine_();
  if (buffer_pos_ == buffer_.size()) refill();
  return buffer_[buffer_pos_++];
}

std::uint32_t Entropy::next_u32() { return static_cast<std::uint32_t>(next_u64() >> 32); }

double Entropy::next_open_unit() {
  // 53 random bits, shifted by half an ulp so that 0 is never produced.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

Entropy Entropy::fork(std::uint64_t stream_id) {
  if (!seeded_) return Entropy::system();
  std::uint64_t base = engine_();
  Entropy child(true);
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  child.engine_.seed(seq);
  return child;
}

}  // namespace velopir
