#include "rectdyne/fidelity.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rectdyne/constants.hpp"
#include "rectdyne/quadrature.hpp"

namespace rectdyne::fidelity {

using constants::kPi;

namespace {

// Brent's minimizer on [a, b] (golden section + parabolic interpolation).
double brent_minimize(double a, double b, double tol, const auto& f) {
  constexpr double kGold = 0.3819660112501051;  // (3 - sqrt(5)) / 2
  double x = a + kGold * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) break;
    bool use_golden = true;
    if (std::abs(e) > tol1) {
      // Parabola through (x, w, v).
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (mid > x) ? tol1 : -tol1;
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x < mid) ? b - x : a - x;
      d = kGold * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

}  // namespace

double fidelity_shot_noise(double alpha_rad) {
  if (!(alpha_rad >= 0.0)) throw std::invalid_argument("fidelity_shot_noise: alpha must be >= 0");
  // (1/pi) Int_{-pi/2}^{pi/2} (sin(a cos phi)+1)/2 dphi
  //   = 1/2 + (1/pi) Int_0^{pi/2} sin(a cos phi) dphi   (even integrand).
  const double integral = quadrature::integrate_adaptive(
      [alpha_rad](double phi) { return std::sin(alpha_rad * std::cos(phi)); }, 0.0, 0.5 * kPi,
      1e-13);
  return 0.5 + integral / kPi;
}

double fidelity_shot_noise_simpson(double alpha_rad, std::size_t panels) {
  if (!(alpha_rad >= 0.0)) throw std::invalid_argument("fidelity_shot_noise: alpha must be >= 0");
  const double integral = quadrature::composite_simpson(
      [alpha_rad](double phi) { return 0.5 * (std::sin(alpha_rad * std::cos(phi)) + 1.0); },
      -0.5 * kPi, 0.5 * kPi, panels);
  return integral / kPi;
}

double optimal_alpha() {
  // Coarse bracket over (0, 2 pi], then Brent. F_SN has a single interior
  // maximum below pi; the grid keeps the bracket robust regardless.
  constexpr int kGrid = 256;
  int best = 1;
  double best_val = -1.0;
  std::vector<double> vals(kGrid + 1, 0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double a = constants::kTwoPi * i / kGrid;
    vals[i] = fidelity_shot_noise(a);
    if (vals[i] > best_val) {
      best_val = vals[i];
      best = i;
    }
  }
  const double lo = constants::kTwoPi * std::max(1, best - 1) / kGrid;
  const double hi = constants::kTwoPi * std::min(kGrid, best + 1) / kGrid;
  return brent_minimize(lo, hi, 1e-9, [](double a) { return -fidelity_shot_noise(a); });
}

double fidelity_with_charge(double alpha_rad, double charge_infidelity) {
  if (!(charge_infidelity >= 0.0 && charge_infidelity <= 1.0))
    throw std::invalid_argument("fidelity_with_charge: charge infidelity must be in [0, 1]");
  return 0.5 * charge_infidelity + (1.0 - charge_infidelity) * fidelity_shot_noise(alpha_rad);
}

double fidelity_alpha_ensemble(double mean_alpha_rad, double alpha_sigma_rad,
                               double charge_infidelity) {
  if (!(alpha_sigma_rad >= 0.0))
    throw std::invalid_argument("fidelity_alpha_ensemble: sigma must be >= 0");
  if (alpha_sigma_rad == 0.0) return fidelity_with_charge(mean_alpha_rad, charge_infidelity);
  const double mu = mean_alpha_rad;
  const double sig = alpha_sigma_rad;
  // Normalization of the truncated-at-zero normal: P(X >= 0).
  const double z = 0.5 * std::erfc(-mu / (sig * std::sqrt(2.0)));
  const double lo = std::max(0.0, mu - 10.0 * sig);
  const double hi = mu + 10.0 * sig;
  const double inv_norm = 1.0 / (sig * std::sqrt(2.0 * kPi));
  const double integral = quadrature::integrate_adaptive(
      [&](double a) {
        const double t = (a - mu) / sig;
        return fidelity_with_charge(a, charge_infidelity) * inv_norm * std::exp(-0.5 * t * t);
      },
      lo, hi, 1e-10);
  return integral / z;
}

double binary_factor(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0))
    throw std::invalid_argument("binary_factor: fidelity must be in [0, 1]");
  return 2.0 * fidelity - 1.0;
}

double reduction_factor(double fidelity) { return (2.0 / kPi) * binary_factor(fidelity); }

FidelityReport make_report(double alpha_rad, double charge_infidelity, double alpha_sigma_rad) {
  FidelityReport r;
  r.alpha_rad = alpha_rad;
  r.charge_infidelity = charge_infidelity;
  r.alpha_sigma_rad = alpha_sigma_rad;
  r.f_shot_noise = fidelity_shot_noise(alpha_rad);
  r.f_total = fidelity_alpha_ensemble(alpha_rad, alpha_sigma_rad, charge_infidelity);
  r.binary_factor = binary_factor(r.f_total);
  r.k = reduction_factor(r.f_total);
  r.psd_signal_loss = 1.0 - r.binary_factor * r.binary_factor;
  return r;
}

}  // namespace rectdyne::fidelity
