#pragma once

// Target RF signal definition, phase sampling, frequency aliasing, and the
// expected (noiseless) photon rate underlying every simulated readout.

#include <cstddef>
#include <cstdint>

#include "rectdyne/rng.hpp"

namespace rectdyne::signal {

enum class PhaseMode { RandomUniform, Fixed };

struct TargetSignal {
  double frequency_hz = 0.0;
  double amplitude_tesla = 0.0;
  PhaseMode phase_mode = PhaseMode::RandomUniform;
  double fixed_phase_rad = 0.0;  // used only in Fixed mode

  void validate() const;  // throws config_error
};

// Timing of one trace: m sequential readouts separated by sample_interval,
// each preceded by a DD block of pulse_count pi-pulses spaced pulse_spacing.
// sensing_time defaults to pulse_count * pulse_spacing (the inter-pulse
// convention; a pi-pulse every tau for N_p pulses spans N_p tau).
struct TraceGeometry {
  std::size_t points_per_trace = 0;
  double sample_interval_s = 0.0;
  double sensing_time_s = 0.0;  // 0 means derive from pulses
  double pulse_spacing_s = 0.0;
  int pulse_count = 0;

  double effective_sensing_time() const {
    return sensing_time_s > 0.0 ? sensing_time_s : pulse_count * pulse_spacing_s;
  }
  void validate() const;  // throws config_error
};

enum class NoiseMode { Poisson, Gaussian };

struct PhotonReadoutModel {
  double mean_photons = 0.0;  // per readout
  double contrast = 0.0;      // 0 < c <= 1
  NoiseMode noise_mode = NoiseMode::Poisson;

  void validate() const;  // throws config_error
};

// Result of folding a frequency into the first Nyquist zone. The original
// frequency is fold_index / sample_interval + fold_sign * frequency_hz.
struct AliasedFrequency {
  double frequency_hz = 0.0;  // in [0, fs/2]
  std::int64_t fold_index = 0;
  int fold_sign = +1;
};

// Fold f into [0, fs/2]: r = f mod fs; r itself if r <= fs/2, else fs - r.
AliasedFrequency alias_frequency(double frequency_hz, double sample_interval_s);

// Reconstruct the pre-fold frequency from the alias metadata.
double unalias_frequency(const AliasedFrequency& aliased, double sample_interval_s);

// Expected photon count of readout j:
//   mean_photons * (1 + (c/2) cos(2 pi f0 j sample_interval + initial_phase))
// with f0 the aliased signal frequency.
double expected_rate(const PhotonReadoutModel& model, const TargetSignal& sig,
                     const TraceGeometry& geometry, double initial_phase_rad, std::size_t index);

// Draw the per-trace initial phase: uniform on [0, 2 pi) or the fixed value.
double sample_phase(const TargetSignal& sig, rng::RandomStream& stream);

}  // namespace rectdyne::signal
