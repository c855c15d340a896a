#pragma once

// Monte Carlo engines for the three measurement protocols: plain sequential
// heterodyne sampling (Qdyne), ex-situ rectification (sign stored in the
// memory readout and applied in post-processing), and in-situ rectification
// (a controlled gate inverts the modulation before the photons are emitted).
//
// Per-trace draw order (frozen; determinism contract):
//   1. alpha_i  — truncated normal, only when alpha_sigma > 0
//   2. kept     — one uniform vs init_success_prob
//   3. charge_ok — one uniform vs 1 - charge_infidelity; then initial phase
//   4. memory   — one uniform (consumed regardless of charge state)
//   5. photon counts, point by point (projective mode draws the spin state
//      first, then the count)
// Each trace uses its own substream keyed by (master_seed, trace_index), so
// any generation order or thread count yields identical traces.

#include <cstdint>
#include <functional>
#include <vector>

#include "rectdyne/physics.hpp"
#include "rectdyne/signal_model.hpp"

namespace rectdyne::protocols {

enum class Protocol { Qdyne, ExSitu, InSitu };

// How the memory (sign) outcome is drawn from the rectification block:
//  - PhaseProjection: Born rule on the phase-sensitive readout,
//    P(Zero | phi) = p0_y_readout(alpha, phi). The literal single-shot model.
//  - BinaryChannel: ideal sign decision (cos phi >= 0 -> Zero) transmitted
//    through a symmetric binary channel with error rate 1 - F_SN(alpha).
//    This is the channel the analytic reduction factor k = (2/pi)(2F-1)
//    describes, so it is the model to use when comparing against that
//    formula. Both models share the marginal P(Zero) = Fcs + (1-Fcs)/2.
enum class MemoryModel { PhaseProjection, BinaryChannel };

// Rate: counts drawn directly from the modulated mean rate (default).
// Projective: the spin state is drawn per readout with the trace-model
// probability (1 + cos(phase_ij))/2, then the count from the state-dependent
// mean n(1 +/- c/2); identical expected trace, adds projection noise.
enum class PhotonSampling { Rate, Projective };

enum class MemoryOutcome : std::uint8_t { Zero = 0, One = 1 };

struct ProtocolConfig {
  Protocol protocol = Protocol::Qdyne;
  physics::InteractionParams interaction;
  signal::PhotonReadoutModel readout;
  signal::TargetSignal signal;
  signal::TraceGeometry geometry;
  std::uint64_t n_traces = 0;
  double charge_infidelity = 0.0;   // probability of a sensing-blind charge state
  double init_success_prob = 1.0;   // traces failing initialization are discarded
  double alpha_sigma_rad = 0.0;     // ensemble spread of the interaction strength
  std::uint64_t master_seed = 1;
  MemoryModel memory_model = MemoryModel::PhaseProjection;
  PhotonSampling photon_sampling = PhotonSampling::Rate;
  double sequence_time_s = 0.0;     // wall-clock length of one trace; 0 = m * dt

  double effective_sequence_time() const {
    return sequence_time_s > 0.0
               ? sequence_time_s
               : geometry.sample_interval_s * static_cast<double>(geometry.points_per_trace);
  }
  void validate() const;  // throws config_error with field-level messages
};

struct PhotonTrace {
  std::vector<double> counts;       // length m; integers in Poisson mode
  double initial_phase = 0.0;
  MemoryOutcome memory_outcome = MemoryOutcome::Zero;
  bool charge_ok = true;
  bool kept = true;
  int rectify_sign = +1;            // +1/-1 applied during coherent averaging
};

struct RunSummary {
  std::uint64_t traces_generated = 0;
  std::uint64_t traces_kept = 0;
  double wall_model_time_s = 0.0;   // effective_sequence_time * traces_generated
};

// Sign for a memory outcome: Zero -> +1, One -> -1. The in-situ protocol
// consumes this at generation time (the stored rectify_sign is then +1, the
// trace already carries the inversion); ex-situ stores it for averaging.
// Calling this for Qdyne is a misuse (no rectification exists there).
int rectification_decision(MemoryOutcome outcome, Protocol protocol);

// Generate trace `index` of the run; pure function of (config, index).
PhotonTrace generate_trace(const ProtocolConfig& config, std::uint64_t index);

// Run the full protocol, delivering traces to `sink` in index order.
// `threads` > 1 generates chunks concurrently; the stream seen by the sink
// is identical for every thread count. Returns the bookkeeping summary.
using TraceSink = std::function<void(std::uint64_t index, PhotonTrace&& trace)>;
RunSummary run_protocol(const ProtocolConfig& config, const TraceSink& sink,
                        unsigned threads = 1);

}  // namespace rectdyne::protocols
