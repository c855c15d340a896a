#pragma once

// Averaging pipelines and PSD-domain SNR estimation.
//
// Conventions (fixed throughout): unnormalized DFT, one-sided power spectrum
// |X_k|^2 for k = 0..floor(m/2) with no factor-two doubling, so a cosine of
// amplitude A on an exact bin carries peak power (m A / 2)^2. The DC bin is
// retained in spectra but always excluded from SNR baselines.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rectdyne/fft.hpp"
#include "rectdyne/protocols.hpp"

namespace rectdyne::spectral {

enum class AveragingMode { CoherentTimeAverage, IncoherentPowerAverage };

struct PSDSpectrum {
  std::vector<double> bin_frequencies;  // hertz, k / (m * dt)
  std::vector<double> power;            // photons^2, length floor(m/2)+1
  std::uint64_t n_averaged = 0;
  AveragingMode mode = AveragingMode::IncoherentPowerAverage;
  double sample_interval_s = 0.0;
  std::size_t trace_length = 0;
};

struct SNREstimate {
  std::size_t peak_bin = 0;
  double peak_power = 0.0;
  double baseline_mean = 0.0;
  double baseline_rms = 0.0;  // std of baseline bin powers around their mean
  double snr = 0.0;           // (peak_power - baseline_mean) / baseline_rms
  bool degenerate_noise_floor = false;  // true when baseline_rms == 0
};

// SNR value reported when the noise floor is exactly zero (noiseless input).
inline constexpr double kSnrSentinel = 1e300;

// One-sided |DFT|^2 of a single trace. subtract_mean removes the sample mean
// before transforming (kills the DC bin without touching other bins for
// on-bin tones).
PSDSpectrum dft_power(std::span<const double> trace, double sample_interval_s,
                      bool subtract_mean = false);

// Streaming coherent (time-domain) averager: accumulates
// rectify_sign * (counts - mean_photons) over kept traces.
class CoherentAverager {
 public:
  CoherentAverager(std::size_t trace_length, double mean_photons, double sample_interval_s,
                   bool subtract_mean = true);
  void add(const protocols::PhotonTrace& trace);
  void merge(const CoherentAverager& other);  // == accumulating the concatenation
  std::uint64_t n_averaged() const { return n_; }
  std::vector<double> averaged_trace() const;  // sum / n
  PSDSpectrum spectrum() const;                // throws if no kept traces added

 private:
  std::size_t m_;
  double baseline_;
  double dt_;
  bool subtract_mean_;
  std::uint64_t n_ = 0;
  std::vector<double> sum_;
};

// Streaming incoherent averager: accumulates per-trace |DFT|^2 (each trace
// mean-subtracted when enabled) over kept traces.
class IncoherentAverager {
 public:
  IncoherentAverager(std::size_t trace_length, double sample_interval_s,
                     bool subtract_mean = true);
  void add(const protocols::PhotonTrace& trace);
  void merge(const IncoherentAverager& other);
  std::uint64_t n_averaged() const { return n_; }
  PSDSpectrum spectrum() const;

 private:
  std::size_t m_;
  double dt_;
  bool subtract_mean_;
  std::uint64_t n_ = 0;
  std::vector<double> power_sum_;
  fft::Plan plan_;
};

// One-shot conveniences over the accumulators.
PSDSpectrum average_coherent(std::span<const protocols::PhotonTrace> traces, double mean_photons,
                             double sample_interval_s, bool subtract_mean = true);
PSDSpectrum average_incoherent(std::span<const protocols::PhotonTrace> traces,
                               double sample_interval_s, bool subtract_mean = true);

// NMR-convention SNR: peak bin (given, or argmax over non-DC bins), baseline
// statistics over non-DC bins outside [peak - w, peak + w].
SNREstimate estimate_snr(const PSDSpectrum& spectrum,
                         std::optional<std::size_t> expected_bin = std::nullopt,
                         std::size_t exclusion_halfwidth = 3);

}  // namespace rectdyne::spectral
