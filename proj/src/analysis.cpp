#include "rectdyne/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rectdyne/constants.hpp"
#include "rectdyne/errors.hpp"
#include "rectdyne/physics.hpp"

namespace rectdyne::analysis {

using constants::kPi;

namespace {

void check_loglog_input(std::span<const double> n, std::span<const double> value,
                        std::size_t min_points) {
  if (n.size() != value.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (n.size() < min_points) throw std::invalid_argument("fit_power_law: too few points");
  for (std::size_t i = 0; i < n.size(); ++i)
    if (!(n[i] > 0.0) || !(value[i] > 0.0))
      throw std::invalid_argument("fit_power_law: points must be positive");
}

}  // namespace

ScalingFit fit_power_law(std::span<const double> n, std::span<const double> value) {
  check_loglog_input(n, value, 3);
  const auto npts = static_cast<double>(n.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]);
    const double y = std::log(value[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = npts * sxx - sx * sx;
  if (det <= 0.0) throw std::invalid_argument("fit_power_law: degenerate abscissae");
  const double slope = (npts * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / npts;

  double rss = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double r = std::log(value[i]) - (intercept + slope * std::log(n[i]));
    rss += r * r;
  }
  const double dof = npts - 2.0;
  const double s2 = dof > 0.0 ? rss / dof : 0.0;

  ScalingFit fit;
  fit.exponent = slope;
  fit.prefactor = std::exp(intercept);
  fit.n_points = n.size();
  fit.exponent_pinned = false;
  // (X^T X)^{-1} for X = [x_i, 1] rows, scaled by s2.
  fit.covariance = {s2 * npts / det, -s2 * sx / det, -s2 * sx / det, s2 * sxx / det};
  return fit;
}

ScalingFit fit_power_law_pinned(std::span<const double> n, std::span<const double> value,
                                double exponent) {
  check_loglog_input(n, value, 1);
  const auto npts = static_cast<double>(n.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) mean += std::log(value[i]) - exponent * std::log(n[i]);
  mean /= npts;
  double rss = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double r = std::log(value[i]) - exponent * std::log(n[i]) - mean;
    rss += r * r;
  }
  const double dof = npts - 1.0;
  const double var_mean = dof > 0.0 ? rss / dof / npts : 0.0;

  ScalingFit fit;
  fit.exponent = exponent;
  fit.prefactor = std::exp(mean);
  fit.n_points = n.size();
  fit.exponent_pinned = true;
  fit.covariance = {0.0, 0.0, 0.0, var_mean};
  return fit;
}

SnrPrediction predict_snr(bool coherent, double mean_photons, std::size_t points_per_trace,
                          double contrast, double k, double n_traces) {
  if (!(mean_photons > 0.0) || points_per_trace < 2 || !(contrast > 0.0) || !(n_traces > 0.0))
    throw std::invalid_argument("predict_snr: physical parameters must be positive");
  const double m = static_cast<double>(points_per_trace);
  const double base = mean_photons * m * contrast * contrast / 16.0;
  SnrPrediction p;
  p.leading = coherent ? base * k * k * n_traces : base * std::sqrt(n_traces);
  p.exact = p.leading - 1.0;
  return p;
}

namespace {

// Residuals of the lineshape model on the sweep for parameters (alpha, f).
void lineshape_residuals(std::span<const double> tau, std::span<const double> y, int pulse_count,
                         double alpha, double f, std::vector<double>& r) {
  const std::vector<double> model =
      physics::dd_lineshape(std::abs(alpha), pulse_count, tau, f);
  r.resize(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) r[i] = model[i] - y[i];
}

double rss_of(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

struct LmResult {
  double alpha = 0.0, f = 0.0, rss = 0.0;
  std::array<double, 4> cov{};
  int iterations = 0;
  bool converged = false;
};

LmResult levenberg_marquardt(std::span<const double> tau, std::span<const double> y,
                             int pulse_count, double alpha0, double f0) {
  constexpr int kMaxIter = 200;
  double alpha = alpha0, f = f0;
  std::vector<double> r, rp, rm, rtrial;
  lineshape_residuals(tau, y, pulse_count, alpha, f, r);
  double rss = rss_of(r);
  double lambda = 1e-3;
  LmResult out;

  const std::size_t npts = tau.size();
  std::vector<double> ja(npts), jf(npts);
  double jtj[3] = {0, 0, 0};  // [aa, af, ff]

  for (int iter = 1; iter <= kMaxIter; ++iter) {
    out.iterations = iter;
    // Numeric Jacobian, central differences.
    const double ha = 1e-6 * std::max(1.0, std::abs(alpha));
    const double hf = std::max(1e-6 * std::abs(f), 1e-3);
    lineshape_residuals(tau, y, pulse_count, alpha + ha, f, rp);
    lineshape_residuals(tau, y, pulse_count, alpha - ha, f, rm);
    for (std::size_t i = 0; i < npts; ++i) ja[i] = (rp[i] - rm[i]) / (2.0 * ha);
    lineshape_residuals(tau, y, pulse_count, alpha, f + hf, rp);
    lineshape_residuals(tau, y, pulse_count, alpha, f - hf, rm);
    for (std::size_t i = 0; i < npts; ++i) jf[i] = (rp[i] - rm[i]) / (2.0 * hf);

    jtj[0] = jtj[1] = jtj[2] = 0.0;
    double g_a = 0.0, g_f = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
      jtj[0] += ja[i] * ja[i];
      jtj[1] += ja[i] * jf[i];
      jtj[2] += jf[i] * jf[i];
      g_a += ja[i] * r[i];
      g_f += jf[i] * r[i];
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const double a00 = jtj[0] * (1.0 + lambda);
      const double a11 = jtj[2] * (1.0 + lambda);
      const double det = a00 * a11 - jtj[1] * jtj[1];
      if (!(std::abs(det) > 0.0)) break;
      const double da = -(a11 * g_a - jtj[1] * g_f) / det;
      const double df = -(a00 * g_f - jtj[1] * g_a) / det;
      lineshape_residuals(tau, y, pulse_count, alpha + da, f + df, rtrial);
      const double rss_trial = rss_of(rtrial);
      if (rss_trial < rss) {
        alpha += da;
        f += df;
        r.swap(rtrial);
        const double drop = rss - rss_trial;
        rss = rss_trial;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        const double step2 = da * da + df * df / std::max(f * f, 1.0);
        if (step2 < 1e-24 || drop < 1e-16 * (1.0 + rss)) {
          out.converged = true;
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
    if (!stepped) {
      // No downhill step available: treat the current point as converged
      // only if the gradient is essentially zero.
      out.converged = std::abs(g_a) + std::abs(g_f) < 1e-10 * (1.0 + rss);
      break;
    }
    if (out.converged) break;
  }

  out.alpha = std::abs(alpha);  // model is even in alpha
  out.f = f;
  out.rss = rss;
  const double dof = static_cast<double>(npts) - 2.0;
  const double s2 = dof > 0.0 ? rss / dof : 0.0;
  const double det = jtj[0] * jtj[2] - jtj[1] * jtj[1];
  if (det > 0.0) {
    out.cov = {s2 * jtj[2] / det, -s2 * jtj[1] / det, -s2 * jtj[1] / det, s2 * jtj[0] / det};
  }
  return out;
}

}  // namespace

LineshapeFit fit_dd_lineshape(std::span<const double> pulse_spacings_s,
                              std::span<const double> signal, int pulse_count, double f_guess_hz,
                              double alpha_guess_rad) {
  if (pulse_spacings_s.size() != signal.size())
    throw std::invalid_argument("fit_dd_lineshape: size mismatch");
  if (pulse_spacings_s.size() < 5)
    throw std::invalid_argument("fit_dd_lineshape: need at least 5 sweep points");
  if (pulse_count < 1) throw std::invalid_argument("fit_dd_lineshape: pulse_count must be >= 1");
  if (!(f_guess_hz > 0.0)) throw std::invalid_argument("fit_dd_lineshape: f_guess must be > 0");

  std::vector<double> starts;
  if (alpha_guess_rad > 0.0) starts.push_back(alpha_guess_rad);
  starts.insert(starts.end(), {0.2 * kPi, 0.5 * kPi, 0.8 * kPi});

  LmResult best;
  best.rss = std::numeric_limits<double>::infinity();
  int total_iters = 0;
  for (double a0 : starts) {
    LmResult res = levenberg_marquardt(pulse_spacings_s, signal, pulse_count, a0, f_guess_hz);
    total_iters += res.iterations;
    if (res.converged && res.rss < best.rss) best = res;
  }
  if (!std::isfinite(best.rss)) {
    std::ostringstream msg;
    msg << "fit_dd_lineshape: no start converged (" << starts.size() << " starts, "
        << total_iters << " total iterations)";
    throw fit_error(msg.str());
  }

  LineshapeFit fit;
  fit.alpha_rad = best.alpha;
  fit.f_target_hz = best.f;
  fit.covariance = best.cov;
  fit.iterations = total_iters;
  fit.rss = best.rss;
  fit.converged = true;
  return fit;
}

const char* to_string(ProtocolLabel label) {
  switch (label) {
    case ProtocolLabel::SingleNoRect: return "single_no_rect";
    case ProtocolLabel::SingleRect: return "single_rect";
    case ProtocolLabel::EnsembleNoRect: return "ensemble_no_rect";
    case ProtocolLabel::EnsembleRect: return "ensemble_rect";
    case ProtocolLabel::Correlation: return "correlation";
    case ProtocolLabel::Casr: return "casr";
  }
  return "unknown";
}

std::vector<ComparisonCurve> comparison_curves(std::span<const double> n_nv_grid,
                                               const ComparisonParams& params) {
  for (double n : n_nv_grid)
    if (!(n > 0.0)) throw std::invalid_argument("comparison_curves: grid must be positive");
  const double c2 = params.contrast_ratio * params.contrast_ratio;
  const double k2 = params.reduction_k * params.reduction_k;
  const double lag_penalty = params.integer_lag
                                 ? std::floor((static_cast<double>(params.trace_points) + 1.0) / 2.0)
                                 : (static_cast<double>(params.trace_points) + 1.0) / 2.0;
  const double tr2 = params.thermal_ratio * params.thermal_ratio;

  auto make = [&](ProtocolLabel label, auto&& f) {
    ComparisonCurve c;
    c.label = label;
    c.n_nv.assign(n_nv_grid.begin(), n_nv_grid.end());
    c.relative_snr.reserve(n_nv_grid.size());
    for (double n : n_nv_grid) c.relative_snr.push_back(f(n));
    return c;
  };

  std::vector<ComparisonCurve> out;
  out.push_back(make(ProtocolLabel::SingleNoRect, [&](double) { return 1.0; }));
  out.push_back(make(ProtocolLabel::SingleRect, [&](double) { return params.rect_gain; }));
  out.push_back(make(ProtocolLabel::EnsembleNoRect, [&](double) { return 1.0 / c2; }));
  out.push_back(
      make(ProtocolLabel::EnsembleRect, [&](double n) { return params.rect_gain / c2 * n; }));
  out.push_back(make(ProtocolLabel::Correlation, [&](double n) {
    return params.rect_gain / (c2 * k2 * lag_penalty) * n;
  }));
  out.push_back(make(ProtocolLabel::Casr,
                     [&](double n) { return params.rect_gain / (c2 * k2 * tr2) * n; }));
  return out;
}

PolarizationLevels polarization_ratio(double spin_density_per_m3, double depth_m,
                                      double omega_rad_per_s, double temperature_k) {
  if (!(spin_density_per_m3 > 0.0) || !(depth_m > 0.0) || !(omega_rad_per_s > 0.0) ||
      !(temperature_k > 0.0))
    throw std::invalid_argument("polarization_ratio: inputs must be positive");
  PolarizationLevels out;
  const double volume = (2.0 / 3.0) * kPi * depth_m * depth_m * depth_m;
  out.statistical = 1.0 / std::sqrt(spin_density_per_m3 * volume);
  out.thermal = std::tanh(constants::kHbar * omega_rad_per_s /
                          (2.0 * constants::kBoltzmann * temperature_k));
  return out;
}

}  // namespace rectdyne::analysis
