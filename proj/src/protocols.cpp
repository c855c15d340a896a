#include "rectdyne/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <stdexcept>
#include <utility>

#include "rectdyne/constants.hpp"
#include "rectdyne/errors.hpp"
#include "rectdyne/fidelity.hpp"
#include "rectdyne/rng.hpp"

namespace rectdyne::protocols {

using constants::kTwoPi;

void ProtocolConfig::validate() const {
  interaction.validate();
  readout.validate();
  signal.validate();
  geometry.validate();
  if (n_traces < 1) throw config_error("run.n_traces must be >= 1");
  if (!(charge_infidelity >= 0.0 && charge_infidelity < 1.0))
    throw config_error("run.charge_infidelity must be in [0, 1)");
  if (!(init_success_prob > 0.0 && init_success_prob <= 1.0))
    throw config_error("run.init_success_prob must be in (0, 1]");
  if (!(alpha_sigma_rad >= 0.0)) throw config_error("run.alpha_sigma_rad must be >= 0");
  if (sequence_time_s < 0.0) throw config_error("run.sequence_time_s must be >= 0");
}

int rectification_decision(MemoryOutcome outcome, Protocol protocol) {
  if (protocol == Protocol::Qdyne)
    throw std::invalid_argument("rectification_decision: Qdyne has no rectification step");
  return outcome == MemoryOutcome::Zero ? +1 : -1;
}

PhotonTrace generate_trace(const ProtocolConfig& config, std::uint64_t index) {
  auto stream = rng::RandomStream::substream(config.master_seed, index);
  PhotonTrace trace;

  // 1. Per-trace interaction strength (ensemble broadening).
  double alpha = config.interaction.alpha_rad;
  if (config.alpha_sigma_rad > 0.0) {
    do {
      alpha = config.interaction.alpha_rad + config.alpha_sigma_rad * stream.normal();
    } while (alpha < 0.0);
  }

  // 2. Initialization success; failed traces are generated in full (the
  // experiment records them too) but flagged for exclusion from averages.
  trace.kept = stream.uniform() < config.init_success_prob;

  // 3. Charge state and the initial signal phase of this repetition.
  trace.charge_ok = stream.uniform() < (1.0 - config.charge_infidelity);
  trace.initial_phase = signal::sample_phase(config.signal, stream);

  // 4. Memory (sign) outcome. The uniform is consumed in every branch so the
  // charge draw never shifts the photon substream.
  const double u_mem = stream.uniform();
  if (!trace.charge_ok) {
    trace.memory_outcome = MemoryOutcome::Zero;  // sensing-blind: memory stays |0>
  } else if (config.memory_model == MemoryModel::PhaseProjection) {
    const double p0 = physics::p0_y_readout(alpha, trace.initial_phase);
    trace.memory_outcome = (u_mem < p0) ? MemoryOutcome::Zero : MemoryOutcome::One;
  } else {
    const MemoryOutcome ideal = (std::cos(trace.initial_phase) >= 0.0) ? MemoryOutcome::Zero
                                                                       : MemoryOutcome::One;
    const double flip_prob = 1.0 - fidelity::fidelity_shot_noise(alpha);
    const bool flip = u_mem < flip_prob;
    trace.memory_outcome = flip ? (ideal == MemoryOutcome::Zero ? MemoryOutcome::One
                                                                : MemoryOutcome::Zero)
                                : ideal;
  }

  // In-situ: the controlled gate inverts the modulation of the emitted trace
  // itself whenever the memory read One.
  const double gate_sign =
      (config.protocol == Protocol::InSitu && trace.memory_outcome == MemoryOutcome::One) ? -1.0
                                                                                          : 1.0;

  // 5. Sequential photon block.
  const std::size_t m = config.geometry.points_per_trace;
  const double f0 =
      signal::alias_frequency(config.signal.frequency_hz, config.geometry.sample_interval_s)
          .frequency_hz;
  const double omega = kTwoPi * f0 * config.geometry.sample_interval_s;
  const double nbar = config.readout.mean_photons;
  const double half_c = 0.5 * config.readout.contrast;
  trace.counts.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double phase = omega * static_cast<double>(j) + trace.initial_phase;
    double mean;
    if (config.photon_sampling == PhotonSampling::Rate) {
      mean = nbar * (1.0 + gate_sign * half_c * std::cos(phase));
    } else {
      // Projective: spin state first (charge-failed traces carry no signal,
      // p = 1/2), then the state-dependent rate.
      const double p0 = trace.charge_ok ? 0.5 * (1.0 + std::cos(phase)) : 0.5;
      bool state0 = stream.uniform() < p0;
      if (gate_sign < 0.0) state0 = !state0;
      mean = nbar * (1.0 + (state0 ? half_c : -half_c));
    }
    trace.counts[j] = (config.readout.noise_mode == signal::NoiseMode::Poisson)
                          ? static_cast<double>(stream.poisson(mean))
                          : stream.normal(mean, std::sqrt(mean));
  }

  // 6. Sign to apply during averaging. In-situ already inverted the trace,
  // so its stored sign is +1; Qdyne never rectifies.
  trace.rectify_sign = (config.protocol == Protocol::ExSitu)
                           ? rectification_decision(trace.memory_outcome, config.protocol)
                           : +1;
  return trace;
}

RunSummary run_protocol(const ProtocolConfig& config, const TraceSink& sink, unsigned threads) {
  config.validate();
  RunSummary summary;
  summary.traces_generated = config.n_traces;
  summary.wall_model_time_s =
      config.effective_sequence_time() * static_cast<double>(config.n_traces);

  auto deliver = [&](std::uint64_t index, PhotonTrace&& t) {
    if (t.kept) ++summary.traces_kept;
    if (sink) sink(index, std::move(t));
  };

  if (threads <= 1) {
    for (std::uint64_t i = 0; i < config.n_traces; ++i) deliver(i, generate_trace(config, i));
    return summary;
  }

  // Chunked generation with a bounded window of futures; chunk boundaries are
  // independent of the thread count and consumption is in index order, so the
  // delivered stream is identical to the serial one.
  constexpr std::uint64_t kChunk = 64;
  struct Pending {
    std::uint64_t begin;
    std::future<std::vector<PhotonTrace>> fut;
  };
  std::deque<Pending> window;
  std::uint64_t next_begin = 0;
  auto launch = [&]() {
    const std::uint64_t begin = next_begin;
    const std::uint64_t end = std::min(begin + kChunk, config.n_traces);
    next_begin = end;
    window.push_back(
        {begin, std::async(std::launch::async, [&config, begin, end]() {
           std::vector<PhotonTrace> chunk;
           chunk.reserve(end - begin);
           for (std::uint64_t i = begin; i < end; ++i) chunk.push_back(generate_trace(config, i));
           return chunk;
         })});
  };
  while (next_begin < config.n_traces && window.size() < threads) launch();
  while (!window.empty()) {
    auto chunk = window.front().fut.get();
    const std::uint64_t begin = window.front().begin;
    window.pop_front();
    if (next_begin < config.n_traces) launch();
    for (std::uint64_t off = 0; off < chunk.size(); ++off)
      deliver(begin + off, std::move(chunk[off]));
  }
  return summary;
}

}  // namespace rectdyne::protocols
