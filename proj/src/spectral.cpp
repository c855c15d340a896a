#include "rectdyne/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace rectdyne::spectral {

namespace {

std::vector<double> bin_frequencies(std::size_t m, double dt) {
  std::vector<double> f(m / 2 + 1);
  const double df = 1.0 / (dt * static_cast<double>(m));
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = df * static_cast<double>(k);
  return f;
}

PSDSpectrum one_sided_power(const std::vector<std::complex<double>>& spec, std::size_t m,
                            double dt) {
  PSDSpectrum out;
  out.trace_length = m;
  out.sample_interval_s = dt;
  out.bin_frequencies = bin_frequencies(m, dt);
  out.power.resize(m / 2 + 1);
  for (std::size_t k = 0; k < out.power.size(); ++k) out.power[k] = std::norm(spec[k]);
  return out;
}

}  // namespace

PSDSpectrum dft_power(std::span<const double> trace, double sample_interval_s,
                      bool subtract_mean) {
  if (trace.size() < 2) throw std::invalid_argument("dft_power: need at least 2 samples");
  if (!(sample_interval_s > 0.0))
    throw std::invalid_argument("dft_power: sample_interval must be > 0");
  const std::size_t m = trace.size();
  fft::Plan plan(m);
  std::vector<std::complex<double>> spec;
  if (subtract_mean) {
    double mean = 0.0;
    for (double v : trace) mean += v;
    mean /= static_cast<double>(m);
    std::vector<double> centered(trace.begin(), trace.end());
    for (double& v : centered) v -= mean;
    spec = plan.forward(std::span<const double>(centered));
  } else {
    spec = plan.forward(trace);
  }
  PSDSpectrum out = one_sided_power(spec, m, sample_interval_s);
  out.n_averaged = 1;
  out.mode = AveragingMode::IncoherentPowerAverage;
  return out;
}

CoherentAverager::CoherentAverager(std::size_t trace_length, double mean_photons,
                                   double sample_interval_s, bool subtract_mean)
    : m_(trace_length),
      baseline_(mean_photons),
      dt_(sample_interval_s),
      subtract_mean_(subtract_mean),
      sum_(trace_length, 0.0) {
  if (trace_length < 2) throw std::invalid_argument("CoherentAverager: trace_length must be >= 2");
  if (!(sample_interval_s > 0.0))
    throw std::invalid_argument("CoherentAverager: sample_interval must be > 0");
}

void CoherentAverager::add(const protocols::PhotonTrace& trace) {
  if (!trace.kept) return;
  if (trace.counts.size() != m_)
    throw std::invalid_argument("CoherentAverager: trace length mismatch");
  const double sign = static_cast<double>(trace.rectify_sign);
  for (std::size_t j = 0; j < m_; ++j) sum_[j] += sign * (trace.counts[j] - baseline_);
  ++n_;
}

void CoherentAverager::merge(const CoherentAverager& other) {
  if (other.m_ != m_) throw std::invalid_argument("CoherentAverager: merge length mismatch");
  for (std::size_t j = 0; j < m_; ++j) sum_[j] += other.sum_[j];
  n_ += other.n_;
}

std::vector<double> CoherentAverager::averaged_trace() const {
  if (n_ == 0) throw std::invalid_argument("CoherentAverager: no kept traces averaged");
  std::vector<double> avg(sum_);
  const double inv = 1.0 / static_cast<double>(n_);
  for (double& v : avg) v *= inv;
  return avg;
}

PSDSpectrum CoherentAverager::spectrum() const {
  std::vector<double> avg = averaged_trace();
  PSDSpectrum out = dft_power(avg, dt_, subtract_mean_);
  out.n_averaged = n_;
  out.mode = AveragingMode::CoherentTimeAverage;
  return out;
}

IncoherentAverager::IncoherentAverager(std::size_t trace_length, double sample_interval_s,
                                       bool subtract_mean)
    : m_(trace_length),
      dt_(sample_interval_s),
      subtract_mean_(subtract_mean),
      power_sum_(trace_length / 2 + 1, 0.0),
      plan_(trace_length) {
  if (trace_length < 2)
    throw std::invalid_argument("IncoherentAverager: trace_length must be >= 2");
  if (!(sample_interval_s > 0.0))
    throw std::invalid_argument("IncoherentAverager: sample_interval must be > 0");
}

void IncoherentAverager::add(const protocols::PhotonTrace& trace) {
  if (!trace.kept) return;
  if (trace.counts.size() != m_)
    throw std::invalid_argument("IncoherentAverager: trace length mismatch");
  std::vector<std::complex<double>> spec;
  if (subtract_mean_) {
    double mean = 0.0;
    for (double v : trace.counts) mean += v;
    mean /= static_cast<double>(m_);
    std::vector<double> centered(trace.counts);
    for (double& v : centered) v -= mean;
    spec = plan_.forward(std::span<const double>(centered));
  } else {
    spec = plan_.forward(std::span<const double>(trace.counts));
  }
  for (std::size_t k = 0; k < power_sum_.size(); ++k) power_sum_[k] += std::norm(spec[k]);
  ++n_;
}

void IncoherentAverager::merge(const IncoherentAverager& other) {
  if (other.m_ != m_) throw std::invalid_argument("IncoherentAverager: merge length mismatch");
  for (std::size_t k = 0; k < power_sum_.size(); ++k) power_sum_[k] += other.power_sum_[k];
  n_ += other.n_;
}

PSDSpectrum IncoherentAverager::spectrum() const {
  if (n_ == 0) throw std::invalid_argument("IncoherentAverager: no kept traces averaged");
  PSDSpectrum out;
  out.trace_length = m_;
  out.sample_interval_s = dt_;
  out.bin_frequencies = bin_frequencies(m_, dt_);
  out.power.resize(power_sum_.size());
  const double inv = 1.0 / static_cast<double>(n_);
  for (std::size_t k = 0; k < power_sum_.size(); ++k) out.power[k] = power_sum_[k] * inv;
  out.n_averaged = n_;
  out.mode = AveragingMode::IncoherentPowerAverage;
  return out;
}

PSDSpectrum average_coherent(std::span<const protocols::PhotonTrace> traces, double mean_photons,
                             double sample_interval_s, bool subtract_mean) {
  if (traces.empty()) throw std::invalid_argument("average_coherent: empty trace set");
  CoherentAverager acc(traces[0].counts.size(), mean_photons, sample_interval_s, subtract_mean);
  for (const auto& t : traces) acc.add(t);
  return acc.spectrum();
}

PSDSpectrum average_incoherent(std::span<const protocols::PhotonTrace> traces,
                               double sample_interval_s, bool subtract_mean) {
  if (traces.empty()) throw std::invalid_argument("average_incoherent: empty trace set");
  IncoherentAverager acc(traces[0].counts.size(), sample_interval_s, subtract_mean);
  for (const auto& t : traces) acc.add(t);
  return acc.spectrum();
}

SNREstimate estimate_snr(const PSDSpectrum& spectrum, std::optional<std::size_t> expected_bin,
                         std::size_t exclusion_halfwidth) {
  const std::size_t nbins = spectrum.power.size();
  if (nbins < 2) throw std::invalid_argument("estimate_snr: spectrum too short");

  SNREstimate est;
  if (expected_bin) {
    if (*expected_bin < 1 || *expected_bin >= nbins)
      throw std::invalid_argument("estimate_snr: expected_bin outside the non-DC range");
    est.peak_bin = *expected_bin;
  } else {
    est.peak_bin = 1;
    for (std::size_t k = 2; k < nbins; ++k)
      if (spectrum.power[k] > spectrum.power[est.peak_bin]) est.peak_bin = k;
  }
  est.peak_power = spectrum.power[est.peak_bin];

  auto in_baseline = [&](std::size_t k) {
    const std::size_t dist = k > est.peak_bin ? k - est.peak_bin : est.peak_bin - k;
    return dist > exclusion_halfwidth;
  };
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 1; k < nbins; ++k) {
    if (!in_baseline(k)) continue;
    sum += spectrum.power[k];
    ++count;
  }
  if (count == 0)
    throw std::invalid_argument("estimate_snr: exclusion window covers every baseline bin");
  est.baseline_mean = sum / static_cast<double>(count);
  double var = 0.0;  // two-pass: immune to mean^2 cancellation
  for (std::size_t k = 1; k < nbins; ++k) {
    if (!in_baseline(k)) continue;
    const double d = spectrum.power[k] - est.baseline_mean;
    var += d * d;
  }
  var /= static_cast<double>(count);
  est.baseline_rms = std::sqrt(var);
  if (est.baseline_rms == 0.0) {
    est.degenerate_noise_floor = true;
    est.snr = (est.peak_power == est.baseline_mean) ? 0.0 : kSnrSentinel;
  } else {
    est.snr = (est.peak_power - est.baseline_mean) / est.baseline_rms;
  }
  return est;
}

}  // namespace rectdyne::spectral
