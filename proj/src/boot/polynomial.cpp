#include "velopir/boot/polynomial.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace velopir::boot {

namespace {

// The FFTW planner is not re-entrant; execution on fresh arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const Complex* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

Spectrum& scratch(std::size_t half) {
  thread_local Spectrum buf;
  if (buf.size() < half) buf.resize(half);
  return buf;
}

}  // namespace

NegacyclicFft::NegacyclicFft(std::size_t n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("polynomial size must be a power of two >= 2");
  const std::size_t half = n / 2;
  twist_.resize(half);
  for (std::size_t j = 0; j < half; ++j)
    twist_[j] = std::polar(1.0, std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));

  Spectrum in(half), out(half);
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(half);
  plan_forward_ = fftw_plan_dft_1d(len, as_fftw(in.data()), as_fftw(out.data()), FFTW_BACKWARD,
                                   FFTW_MEASURE);
  plan_inverse_ = fftw_plan_dft_1d(len, as_fftw(in.data()), as_fftw(out.data()), FFTW_FORWARD,
                                   FFTW_MEASURE);
  if (!plan_forward_ || !plan_inverse_) throw std::runtime_error("FFTW planning failed");
}

NegacyclicFft::~NegacyclicFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

const NegacyclicFft& NegacyclicFft::of(std::size_t N) {
  static std::mutex m;
  static std::map<std::size_t, std::unique_ptr<NegacyclicFft>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[N];
  if (!slot) slot.reset(new NegacyclicFft(N));
  return *slot;
}

void NegacyclicFft::forward_twisted(Spectrum& out) const {
  const std::size_t half = n_ / 2;
  if (out.size() != half) out.resize(half);
  fftw_execute_dft(static_cast<fftw_plan>(plan_forward_), as_fftw(scratch(half).data()),
                   as_fftw(out.data()));
}

void NegacyclicFft::forward(std::span<const std::int32_t> coeffs, Spectrum& out) const {
  const std::size_t half = n_ / 2;
  if (coeffs.size() != n_) throw std::invalid_argument("polynomial size mismatch");
  Spectrum& buf = scratch(half);
  for (std::size_t j = 0; j < half; ++j) {
    const double re = coeffs[j], im = coeffs[j + half];
    const double tr = twist_[j].real(), ti = twist_[j].imag();
    buf[j] = Complex(re * tr - im * ti, re * ti + im * tr);
  }
  forward_twisted(out);
}

void NegacyclicFft::forward(std::span<const Torus> coeffs, Spectrum& out) const {
  const std::size_t half = n_ / 2;
  if (coeffs.size() != n_) throw std::invalid_argument("polynomial size mismatch");
  Spectrum& buf = scratch(half);
  for (std::size_t j = 0; j < half; ++j) {
    const double re = coeffs[j].as_signed(), im = coeffs[j + half].as_signed();
    const double tr = twist_[j].real(), ti = twist_[j].imag();
    buf[j] = Complex(re * tr - im * ti, re * ti + im * tr);
  }
  forward_twisted(out);
}

void NegacyclicFft::inverse(const Spectrum& in, std::span<Torus> out) const {
  const std::size_t half = n_ / 2;
  if (in.size() != half || out.size() != n_) throw std::invalid_argument("spectrum size mismatch");
  Spectrum& buf = scratch(half);
  fftw_execute_dft(static_cast<fftw_plan>(plan_inverse_), as_fftw(in.data()), as_fftw(buf.data()));
  const double scale = 1.0 / static_cast<double>(half);
  // Inputs are 32-bit torus words times small digits summed over at most a
  // few thousand terms, so every coefficient fits comfortably in an int64.
  for (std::size_t j = 0; j < half; ++j) {
    const double br = buf[j].real(), bi = buf[j].imag();
    const double tr = twist_[j].real(), ti = twist_[j].imag();
    const double re = (br * tr + bi * ti) * scale;
    const double im = (bi * tr - br * ti) * scale;
    out[j] = Torus(static_cast<std::uint32_t>(static_cast<std::int64_t>(std::nearbyint(re))));
    out[j + half] = Torus(static_cast<std::uint32_t>(static_cast<std::int64_t>(std::nearbyint(im))));
  }
}

void NegacyclicFft::mul_add(Spectrum& acc, const Spectrum& a, const Spectrum& b) {
  const std::size_t n = acc.size();
  // Spelled out on the real/imaginary parts so the compiler vectorizes it.
  auto* pa = reinterpret_cast<const double*>(a.data());
  auto* pb = reinterpret_cast<const double*>(b.data());
  auto* pc = reinterpret_cast<double*>(acc.data());
  for (std::size_t j = 0; j < n; ++j) {
    const double ar = pa[2 * j], ai = pa[2 * j + 1];
    const double br = pb[2 * j], bi = pb[2 * j + 1];
    pc[2 * j] += ar * br - ai * bi;
    pc[2 * j + 1] += ar * bi + ai * br;
  }
}

TorusPolynomial negacyclic_mul_exact(std::span<const std::int32_t> a, std::span<const Torus> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("polynomial size mismatch");
  std::vector<std::uint32_t> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ai = static_cast<std::uint32_t>(a[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint32_t prod = ai * b[j].raw;
      if (i + j < n)
        acc[i + j] += prod;
      else
        acc[i + j - n] -= prod;
    }
  }
  TorusPolynomial out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = Torus(acc[i]);
  return out;
}

TorusPolynomial negacyclic_mul(std::span<const std::int32_t> a, std::span<const Torus> b) {
  const auto& fft = NegacyclicFft::of(a.size());
  Spectrum fa = fft.make_spectrum(), fb = fft.make_spectrum(), prod = fft.make_spectrum();
  fft.forward(a, fa);
  fft.forward(b, fb);
  NegacyclicFft::mul_add(prod, fa, fb);
  TorusPolynomial out(a.size());
  fft.inverse(prod, out);
  return out;
}

void mul_by_monomial(std::span<const Torus> in, std::uint32_t e, std::span<Torus> out) {
  const std::uint32_t n = static_cast<std::uint32_t>(in.size());
  e %= 2 * n;
  if (e < n) {
    for (std::uint32_t j = 0; j < e; ++j) out[j] = -in[j + n - e];
    for (std::uint32_t j = e; j < n; ++j) out[j] = in[j - e];
  } else {
    e -= n;
    for (std::uint32_t j = 0; j < e; ++j) out[j] = in[j + n - e];
    for (std::uint32_t j = e; j < n; ++j) out[j] = -in[j - e];
  }
}

}  // namespace velopir::boot
