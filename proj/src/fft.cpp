#include "rectdyne/fft.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "rectdyne/constants.hpp"

namespace rectdyne::fft {

using constants::kPi;
using constants::kTwoPi;
using cdouble = std::complex<double>;

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// tbl[k] = exp(-2 pi i k / n) for k < n/2; each entry from std::polar so no
// incremental rounding accumulates.
std::vector<cdouble> twiddle_table(std::size_t n) {
  std::vector<cdouble> tbl(n / 2);
  for (std::size_t k = 0; k < tbl.size(); ++k)
    tbl[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  return tbl;
}

void fft_pow2_tbl(std::vector<cdouble>& a, bool inverse, const std::vector<cdouble>& tbl) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cdouble w0 = tbl[k * stride];
        const cdouble w = inverse ? std::conj(w0) : w0;
        const cdouble u = a[i + k];
        const cdouble v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= scale;
  }
}

}  // namespace

void fft_pow2(std::vector<cdouble>& a, bool inverse) {
  if (!is_pow2(a.size())) throw std::invalid_argument("fft_pow2: size must be a power of two");
  if (a.size() < 2) return;
  fft_pow2_tbl(a, inverse, twiddle_table(a.size()));
}

Plan::Plan(std::size_t n) : n_(n) {
  if (n < 1) throw std::invalid_argument("fft::Plan: size must be >= 1");
  pow2_ = is_pow2(n);
  if (pow2_) {
    if (n >= 2) twiddle_ = twiddle_table(n);
    return;
  }
  // Bluestein: with chirp_t = exp(-i pi t^2 / n),
  //   X_k = chirp_k * IFFT( FFT(x_j chirp_j) . FFT(b) )[k],
  // where b_t = conj(chirp_t) laid out circularly for t in (-n, n) on a
  // padded power-of-two grid.
  nfft_ = next_pow2(2 * n - 1);
  twiddle_ = twiddle_table(nfft_);
  chirp_.resize(n);
  const auto m2 = static_cast<std::int64_t>(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    // j^2 mod 2n keeps the polar argument in (-2 pi, 0] and exact.
    const auto jj = static_cast<std::int64_t>(j);
    const std::int64_t r = (jj * jj) % m2;
    chirp_[j] = std::polar(1.0, -kPi * static_cast<double>(r) / static_cast<double>(n));
  }
  std::vector<cdouble> b(nfft_, cdouble{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) {
    const cdouble c = std::conj(chirp_[j]);
    b[j] = c;
    if (j != 0) b[nfft_ - j] = c;
  }
  fft_pow2_tbl(b, false, twiddle_);
  chirp_fft_ = std::move(b);
}

std::vector<cdouble> Plan::forward(std::span<const double> input) const {
  std::vector<cdouble> tmp(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) tmp[i] = cdouble{input[i], 0.0};
  return forward(std::span<const cdouble>(tmp));
}

std::vector<cdouble> Plan::forward(std::span<const cdouble> input) const {
  if (input.size() != n_) throw std::invalid_argument("fft::Plan: input length mismatch");
  if (pow2_) {
    std::vector<cdouble> a(input.begin(), input.end());
    if (n_ >= 2) fft_pow2_tbl(a, false, twiddle_);
    return a;
  }
  std::vector<cdouble> a(nfft_, cdouble{0.0, 0.0});
  for (std::size_t j = 0; j < n_; ++j) a[j] = input[j] * chirp_[j];
  fft_pow2_tbl(a, false, twiddle_);
  for (std::size_t j = 0; j < nfft_; ++j) a[j] *= chirp_fft_[j];
  fft_pow2_tbl(a, true, twiddle_);
  std::vector<cdouble> out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = a[k] * chirp_[k];
  return out;
}

}  // namespace rectdyne::fft
