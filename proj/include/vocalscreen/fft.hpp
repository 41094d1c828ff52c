#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vocalscreen {

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 decimation-in-time FFT with precomputed twiddles and
// bit-reversal permutation. Immutable after construction, so one instance can
// be shared across threads.
class Fft {
 public:
  explicit Fft(std::size_t size);

  std::size_t size() const { return size_; }

  // Unnormalized forward transform, X[k] = sum_n x[n] exp(-2*pi*i*k*n/N).
  void forward(std::span<std::complex<double>> data) const;

 private:
  std::size_t size_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::size_t> bit_reverse_;
};

}  // namespace vocalscreen
