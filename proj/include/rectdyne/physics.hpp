#pragma once

// Analytic sensing physics: accumulated phase, readout probabilities,
// dynamical-decoupling lineshape, and the field <-> interaction-strength
// conversion.

#include <span>
#include <vector>

#include "rectdyne/constants.hpp"

namespace rectdyne::physics {

// Interaction of the target field with the sensor spin.
struct InteractionParams {
  double alpha_rad = 0.0;  // accumulated phase amplitude per sensing block
  double gyromagnetic_hz_per_t = constants::kElectronGyromagneticHzPerT;
  double detuning_hz = 0.0;  // detuning of the DD filter from the target

  void validate() const;  // throws config_error
};

// Bessel function of the first kind, order zero.
// Absolute error <= 1e-12 on |x| <= 50 (power series for small arguments,
// exponentially convergent periodic quadrature of the integral
// representation beyond).
double bessel_j0(double x);

// sin(x)/x with the removable singularity handled by a Taylor series for
// |x| < 1e-6. The pi of the usual normalized sinc is NOT implied: callers
// pass the full argument.
double sinc_pi(double x);

// alpha = 4 * B * gamma * tau_sens (radians).
double alpha_from_field(double field_tesla, double sensing_time_s,
                        double gyromagnetic_hz_per_t = constants::kElectronGyromagneticHzPerT);

// Inverse of alpha_from_field.
double field_from_alpha(double alpha_rad, double sensing_time_s,
                        double gyromagnetic_hz_per_t = constants::kElectronGyromagneticHzPerT);

// theta = alpha * cos(phase) * sinc(N_p * pi * detuning * tau).
double accumulated_phase(double alpha_rad, double phase_rad, int pulse_count,
                         double detuning_hz, double pulse_spacing_s);

// Probability of reading |0> after the second pi/2 pulse along x.
double p0_x_readout(double theta_rad);

// Probability of reading |0> after a phase-sensitive (y) readout on
// resonance: (sin(alpha cos phase) + 1) / 2.
double p0_y_readout(double alpha_rad, double phase_rad);

// DD noise-spectroscopy lineshape: for each pulse spacing tau, the detuning
// is delta = 1/(2 tau) - f_target and the signal is
// (1 - J0(alpha * sinc(N_p pi delta tau))) / 2.
std::vector<double> dd_lineshape(double alpha_rad, int pulse_count,
                                 std::span<const double> pulse_spacings_s,
                                 double target_frequency_hz);

}  // namespace rectdyne::physics
