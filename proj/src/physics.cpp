#include "rectdyne/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rectdyne/errors.hpp"

namespace rectdyne::physics {

using constants::kPi;

void InteractionParams::validate() const {
  if (!(alpha_rad >= 0.0)) throw config_error("interaction.alpha_rad must be >= 0");
  if (!(gyromagnetic_hz_per_t > 0.0))
    throw config_error("interaction.gyromagnetic_hz_per_t must be > 0");
  if (!std::isfinite(detuning_hz)) throw config_error("interaction.detuning_hz must be finite");
}

double bessel_j0(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("bessel_j0: non-finite argument");
  x = std::abs(x);
  if (x <= 8.0) {
    // Power series sum_k (-1)^k (x^2/4)^k / (k!)^2; largest term at x = 8 is
    // ~1e2, so cancellation stays well below the 1e-12 budget.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 64; ++k) {
      term *= -q / (static_cast<double>(k) * static_cast<double>(k));
      sum += term;
      if (std::abs(term) < 1e-17) break;
    }
    return sum;
  }
  // J0(x) = (1/pi) Int_0^pi cos(x sin t) dt. The integrand is an entire
  // pi-periodic function of t, so an n-point midpoint rule converges
  // exponentially: the residual is ~2 J_{2n}(x), which for n >= 0.7 x + 34
  // is far below 1e-15 (Bessel orders beyond the argument decay
  // super-exponentially).
  const int n = std::max(48, static_cast<int>(0.7 * x) + 34);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kPi * (i + 0.5) / n;
    acc += std::cos(x * std::sin(t));
  }
  return acc / n;
}

double sinc_pi(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-6) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double alpha_from_field(double field_tesla, double sensing_time_s, double gyromagnetic_hz_per_t) {
  if (!(field_tesla >= 0.0)) throw std::invalid_argument("alpha_from_field: field must be >= 0");
  if (!(sensing_time_s > 0.0) || !(gyromagnetic_hz_per_t > 0.0))
    throw std::invalid_argument("alpha_from_field: time and gyromagnetic ratio must be > 0");
  return 4.0 * field_tesla * gyromagnetic_hz_per_t * sensing_time_s;
}

double field_from_alpha(double alpha_rad, double sensing_time_s, double gyromagnetic_hz_per_t) {
  if (!(alpha_rad >= 0.0)) throw std::invalid_argument("field_from_alpha: alpha must be >= 0");
  if (!(sensing_time_s > 0.0) || !(gyromagnetic_hz_per_t > 0.0))
    throw std::invalid_argument("field_from_alpha: time and gyromagnetic ratio must be > 0");
  return alpha_rad / (4.0 * gyromagnetic_hz_per_t * sensing_time_s);
}

double accumulated_phase(double alpha_rad, double phase_rad, int pulse_count, double detuning_hz,
                         double pulse_spacing_s) {
  if (!(alpha_rad >= 0.0)) throw std::invalid_argument("accumulated_phase: alpha must be >= 0");
  return alpha_rad * std::cos(phase_rad) *
         sinc_pi(pulse_count * kPi * detuning_hz * pulse_spacing_s);
}

double p0_x_readout(double theta_rad) { return 0.5 * (std::cos(theta_rad) + 1.0); }

double p0_y_readout(double alpha_rad, double phase_rad) {
  return 0.5 * (std::sin(alpha_rad * std::cos(phase_rad)) + 1.0);
}

std::vector<double> dd_lineshape(double alpha_rad, int pulse_count,
                                 std::span<const double> pulse_spacings_s,
                                 double target_frequency_hz) {
  if (!(alpha_rad >= 0.0)) throw std::invalid_argument("dd_lineshape: alpha must be >= 0");
  if (pulse_count < 1) throw std::invalid_argument("dd_lineshape: pulse_count must be >= 1");
  std::vector<double> signal;
  signal.reserve(pulse_spacings_s.size());
  for (double tau : pulse_spacings_s) {
    if (!(tau > 0.0)) throw std::invalid_argument("dd_lineshape: pulse spacings must be > 0");
    const double delta = 1.0 / (2.0 * tau) - target_frequency_hz;
    const double arg = alpha_rad * sinc_pi(pulse_count * kPi * delta * tau);
    signal.push_back(0.5 * (1.0 - bessel_j0(arg)));
  }
  return signal;
}

}  // namespace rectdyne::physics
