#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <new>
#include <span>
#include <vector>

#include "velopir/torus/torus.hpp"

namespace velopir::boot {

/// Element of T_N[X] = T[X] / (X^N + 1).
using TorusPolynomial = std::vector<Torus>;
/// Element of Z_N[X] with small coefficients (key bits, gadget digits).
using IntPolynomial = std::vector<std::int32_t>;

template <class T, std::size_t Align = 64>
struct AlignedAllocator {
  using value_type = T;
  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Align>;
  };
  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Align>&) {}
  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{Align}));
  }
  void deallocate(T* p, std::size_t) { ::operator delete(p, std::align_val_t{Align}); }
  template <class U>
  bool operator==(const AlignedAllocator<U, Align>&) const {
    return true;
  }
};

using Complex = std::complex<double>;
/// Evaluations of a real polynomial at the N/2 roots exp(i*pi*(4j+1)/N).
using Spectrum = std::vector<Complex, AlignedAllocator<Complex>>;

/// Negacyclic transform for a fixed N via a folded N/2-point complex FFT:
/// coefficients j and j+N/2 are packed as real and imaginary parts, twisted
/// by exp(i*pi*j/N), and transformed. Pointwise products of spectra are
/// products in Z[X]/(X^N+1). Instances are cached per N and are safe to use
/// from many threads.
class NegacyclicFft {
 public:
  static const NegacyclicFft& of(std::size_t N);

  std::size_t degree() const { return n_; }
  Spectrum make_spectrum() const { return Spectrum(n_ / 2); }

  void forward(std::span<const std::int32_t> coeffs, Spectrum& out) const;
  /// Torus coefficients enter as their signed 32-bit representatives.
  void forward(std::span<const Torus> coeffs, Spectrum& out) const;
  /// Rounds each coefficient to the nearest integer and reduces mod 2^32.
  void inverse(const Spectrum& in, std::span<Torus> out) const;

  /// acc += a * b, pointwise.
  static void mul_add(Spectrum& acc, const Spectrum& a, const Spectrum& b);

  ~NegacyclicFft();
  NegacyclicFft(const NegacyclicFft&) = delete;
  NegacyclicFft& operator=(const NegacyclicFft&) = delete;

 private:
  explicit NegacyclicFft(std::size_t n);
  void forward_twisted(Spectrum& out) const;

  std::size_t n_;
  std::vector<Complex> twist_;
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
};

/// Exact product mod (X^N + 1, 2^32). Quadratic; the reference the FFT path
/// is tested against.
TorusPolynomial negacyclic_mul_exact(std::span<const std::int32_t> a,
                                     std::span<const Torus> b);

/// FFT product of an integer polynomial and a torus polynomial.
TorusPolynomial negacyclic_mul(std::span<const std::int32_t> a, std::span<const Torus> b);

/// out = X^e * in with e taken mod 2N.
void mul_by_monomial(std::span<const Torus> in, std::uint32_t e, std::span<Torus> out);

}  // namespace velopir::boot
