#pragma once

// Scaling-law fitting, analytic SNR predictions, DD-lineshape fitting for
// interaction-strength extraction, the cross-protocol sensitivity comparison
// calculator, and nuclear polarization levels.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rectdyne::analysis {

// Power-law fit value = prefactor * N^exponent, performed as linear least
// squares in log-log space. Covariance is 2x2 row-major over the parameters
// (exponent, log prefactor); in pinned mode only [1][1] (the log-prefactor
// variance) is nonzero.
struct ScalingFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::array<double, 4> covariance{};
  std::size_t n_points = 0;
  bool exponent_pinned = false;
};

ScalingFit fit_power_law(std::span<const double> n, std::span<const double> value);
ScalingFit fit_power_law_pinned(std::span<const double> n, std::span<const double> value,
                                double exponent);

// Analytic PSD-domain SNR of the two averaging modes:
//   coherent:    (nbar m c^2 k^2 / 16) N - 1
//   incoherent:  (nbar m c^2 / 16) sqrt(N) - 1
// `leading` omits the -1 noise-self-subtraction term; k is ignored in the
// incoherent mode.
struct SnrPrediction {
  double exact = 0.0;
  double leading = 0.0;
};
SnrPrediction predict_snr(bool coherent, double mean_photons, std::size_t points_per_trace,
                          double contrast, double k, double n_traces);

// Nonlinear least-squares fit of the DD lineshape
//   S(tau) = (1 - J0(alpha sinc(N_p pi (1/(2 tau) - f) tau))) / 2
// for (alpha, f). Levenberg-Marquardt with a numeric Jacobian, multi-started
// over alpha in {guess, 0.2 pi, 0.5 pi, 0.8 pi} to escape the J0 oscillation
// ambiguity. Throws fit_error when no start converges.
struct LineshapeFit {
  double alpha_rad = 0.0;
  double f_target_hz = 0.0;
  std::array<double, 4> covariance{};  // row-major over (alpha, f)
  int iterations = 0;
  double rss = 0.0;
  bool converged = false;
};
LineshapeFit fit_dd_lineshape(std::span<const double> pulse_spacings_s,
                              std::span<const double> signal, int pulse_count,
                              double f_guess_hz, double alpha_guess_rad);

// Cross-protocol sensitivity comparison, all values relative to a single
// sensor without rectification (reference = 1).
enum class ProtocolLabel { SingleNoRect, SingleRect, EnsembleNoRect, EnsembleRect, Correlation, Casr };
const char* to_string(ProtocolLabel label);

struct ComparisonParams {
  double contrast_ratio = 6.0;   // ensemble/single contrast penalty (squared in power)
  double rect_gain = 4.0;        // empirical single-sensor rectification gain
  double reduction_k = 0.4;      // amplitude reduction assumed for correlation/CASR
  double thermal_ratio = 300.0;  // statistical/thermal polarization amplitude ratio
  std::size_t trace_points = 4000;  // m; correlation keeps (m+1)/2 lag points
  bool integer_lag = false;   // round (m+1)/2 down to 2000 at m = 4000
};

struct ComparisonCurve {
  ProtocolLabel label;
  std::vector<double> n_nv;
  std::vector<double> relative_snr;
};

std::vector<ComparisonCurve> comparison_curves(std::span<const double> n_nv_grid,
                                               const ComparisonParams& params = {});

// Nuclear polarization levels: statistical 1/sqrt(rho * (2/3) pi d^3) for a
// detection hemisphere of radius d, thermal tanh(hbar omega / 2 kB T).
struct PolarizationLevels {
  double statistical = 0.0;
  double thermal = 0.0;
};
PolarizationLevels polarization_ratio(double spin_density_per_m3, double depth_m,
                                      double omega_rad_per_s, double temperature_k);

}  // namespace rectdyne::analysis
