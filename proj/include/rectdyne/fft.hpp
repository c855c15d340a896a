#pragma once

// Unnormalized complex DFT: X_k = sum_j x_j exp(-2 pi i j k / n).
// Power-of-two sizes use an iterative radix-2 transform; any other size goes
// through Bluestein's chirp-z algorithm (the convolution is carried out on a
// padded power-of-two grid). A Plan caches the twiddle/chirp tables for one
// size and is immutable after construction (safe to share across threads).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rectdyne::fft {

// In-place radix-2 transform; a.size() must be a power of two.
// inverse=true applies the conjugate transform and the 1/n scale.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

class Plan {
 public:
  explicit Plan(std::size_t n);

  std::size_t size() const { return n_; }

  // Forward DFT of a real or complex input of length size().
  std::vector<std::complex<double>> forward(std::span<const double> input) const;
  std::vector<std::complex<double>> forward(std::span<const std::complex<double>> input) const;

 private:
  std::size_t n_ = 0;
  bool pow2_ = false;
  std::size_t nfft_ = 0;                          // padded size for Bluestein
  std::vector<std::complex<double>> twiddle_;     // radix-2 twiddle table
  std::vector<std::complex<double>> chirp_;       // exp(-i pi j^2 / n)
  std::vector<std::complex<double>> chirp_fft_;   // FFT of the padded conjugate chirp
};

}  // namespace rectdyne::fft
