#include "rectdyne/signal_model.hpp"

#include <cmath>
#include <stdexcept>

#include "rectdyne/constants.hpp"
#include "rectdyne/errors.hpp"

namespace rectdyne::signal {

using constants::kTwoPi;

void TargetSignal::validate() const {
  if (!(frequency_hz > 0.0)) throw config_error("signal.frequency_hz must be > 0");
  if (!(amplitude_tesla >= 0.0)) throw config_error("signal.amplitude_tesla must be >= 0");
  if (phase_mode == PhaseMode::Fixed && !std::isfinite(fixed_phase_rad))
    throw config_error("signal.phase must be finite");
}

void TraceGeometry::validate() const {
  if (points_per_trace < 2) throw config_error("geometry.points_per_trace must be >= 2");
  if (!(sample_interval_s > 0.0)) throw config_error("geometry.sample_interval_s must be > 0");
  if (!(pulse_spacing_s > 0.0)) throw config_error("geometry.pulse_spacing_s must be > 0");
  if (pulse_count < 1) throw config_error("geometry.pulse_count must be >= 1");
  if (!(effective_sensing_time() > 0.0)) throw config_error("geometry.sensing_time_s must be > 0");
}

void PhotonReadoutModel::validate() const {
  if (!(mean_photons > 0.0)) throw config_error("readout.mean_photons must be > 0");
  if (!(contrast > 0.0 && contrast <= 1.0))
    throw config_error("readout.contrast must be in (0, 1]");
}

AliasedFrequency alias_frequency(double frequency_hz, double sample_interval_s) {
  if (!(sample_interval_s > 0.0))
    throw std::invalid_argument("alias_frequency: sample_interval must be > 0");
  if (!(frequency_hz >= 0.0)) throw std::invalid_argument("alias_frequency: frequency must be >= 0");
  const double fs = 1.0 / sample_interval_s;
  double r = std::fmod(frequency_hz, fs);
  auto q = static_cast<std::int64_t>(std::llround((frequency_hz - r) / fs));
  AliasedFrequency out;
  if (r <= 0.5 * fs) {
    out.frequency_hz = r;
    out.fold_index = q;
    out.fold_sign = +1;
  } else {
    out.frequency_hz = fs - r;
    out.fold_index = q + 1;
    out.fold_sign = -1;
  }
  return out;
}

double unalias_frequency(const AliasedFrequency& aliased, double sample_interval_s) {
  if (!(sample_interval_s > 0.0))
    throw std::invalid_argument("unalias_frequency: sample_interval must be > 0");
  const double fs = 1.0 / sample_interval_s;
  return static_cast<double>(aliased.fold_index) * fs + aliased.fold_sign * aliased.frequency_hz;
}

double expected_rate(const PhotonReadoutModel& model, const TargetSignal& sig,
                     const TraceGeometry& geometry, double initial_phase_rad, std::size_t index) {
  if (index >= geometry.points_per_trace)
    throw std::invalid_argument("expected_rate: readout index out of range");
  const double f0 = alias_frequency(sig.frequency_hz, geometry.sample_interval_s).frequency_hz;
  const double phase = kTwoPi * f0 * static_cast<double>(index) * geometry.sample_interval_s +
                       initial_phase_rad;
  return model.mean_photons * (1.0 + 0.5 * model.contrast * std::cos(phase));
}

double sample_phase(const TargetSignal& sig, rng::RandomStream& stream) {
  if (sig.phase_mode == PhaseMode::Fixed) return sig.fixed_phase_rad;
  return stream.uniform(0.0, kTwoPi);
}

}  // namespace rectdyne::signal
