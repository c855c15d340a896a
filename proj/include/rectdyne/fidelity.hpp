#pragma once

// Rectification fidelity and its consequences: shot-noise-limited fidelity,
// charge-state degradation, interaction-strength-ensemble averaging, and the
// amplitude reduction factor applied to rectified averages.

#include <cstddef>

namespace rectdyne::fidelity {

struct FidelityReport {
  double alpha_rad = 0.0;
  double charge_infidelity = 0.0;
  double alpha_sigma_rad = 0.0;
  double f_shot_noise = 0.5;   // F_SN at alpha_rad
  double f_total = 0.5;        // includes charge channel and alpha ensemble
  double binary_factor = 0.0;  // 2 F_total - 1
  double k = 0.0;              // (2/pi)(2 F_total - 1)
  double psd_signal_loss = 1.0;  // 1 - (2 F_total - 1)^2, vs deterministic rectification
};

// Probability that a sign decision based on a single phase-sensitive readout
// is correct, averaged over the correct-sign phase lobe:
// F_SN(alpha) = (1/pi) Int_{-pi/2}^{pi/2} (sin(alpha cos phi) + 1)/2 dphi.
// Adaptive quadrature, absolute error well below 1e-9.
double fidelity_shot_noise(double alpha_rad);

// Same integral via composite Simpson with a fixed panel count; independent
// fallback used to cross-check the adaptive result (agreement contract 1e-8).
double fidelity_shot_noise_simpson(double alpha_rad, std::size_t panels = 10000);

// Maximizer of fidelity_shot_noise over alpha in (0, 2 pi], located by a
// grid bracket plus Brent refinement; accurate to better than 1e-6 rad.
double optimal_alpha();

// F = Fcs/2 + (1 - Fcs) F_SN(alpha): a failed charge state carries no sign
// information, so that fraction of decisions is a coin toss.
double fidelity_with_charge(double alpha_rad, double charge_infidelity);

// Expectation of fidelity_with_charge over alpha ~ Normal(mean, sigma)
// truncated at 0 (quadrature against the truncated-normal density, absolute
// error <= 1e-8; sigma = 0 degenerates to fidelity_with_charge).
double fidelity_alpha_ensemble(double mean_alpha_rad, double alpha_sigma_rad,
                               double charge_infidelity);

// 2F - 1: the attenuation of a binary (+1/-1) channel with error rate 1 - F.
double binary_factor(double fidelity);

// k = (2/pi)(2F - 1): full amplitude reduction of rectified averaging, the
// 2/pi being the phase-average of |cos| over the decision lobe. Negative for
// F < 0.5 (anti-rectification).
double reduction_factor(double fidelity);

// Convenience: evaluate everything for one (alpha, Fcs, sigma_alpha) triple.
FidelityReport make_report(double alpha_rad, double charge_infidelity, double alpha_sigma_rad);

}  // namespace rectdyne::fidelity
