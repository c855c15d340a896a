#pragma once

// CLI command implementations, kept independent of argument parsing so tests
// can invoke them in-process. Each command returns 0 on success and throws
// (config_error / fit_error / io_error) on failure; the binary maps these to
// exit codes 2 / 3 / 4.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rectdyne/analysis.hpp"

namespace rectdyne::cli {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_dir = ".";
  std::string format = "csv";  // csv | json for tabular outputs
  unsigned threads = 1;
  bool subtract_mean = true;
  bool write_traces = true;
};

int cmd_simulate(const CommonOptions& options);

struct ScalingOptions {
  CommonOptions common;
  std::vector<std::uint64_t> n_grid;  // kept-trace prefix sizes, ascending
};

int cmd_scaling(const ScalingOptions& options);

struct FidelityOptions {
  double alpha_rad = 0.0;
  double charge_infidelity = 0.0;
  double alpha_sigma_rad = 0.0;
  bool sweep = false;  // alpha sweep at the given charge infidelity / sigma
  double sweep_alpha_min_over_pi = 0.05;
  double sweep_alpha_max_over_pi = 1.0;
  std::size_t sweep_points = 96;
  std::string out_dir = ".";
  std::string format = "csv";
};

int cmd_fidelity(const FidelityOptions& options);

struct DdfitOptions {
  std::string input_csv;  // empty: generate a synthetic sweep instead
  // Synthetic sweep parameters.
  double alpha_over_pi = 0.57;
  double f_target_hz = 166666.0;
  int pulse_count = 8;
  double tau_min_s = 0.0;  // 0: derive from f_target
  double tau_max_s = 0.0;
  std::size_t tau_points = 61;
  double noise_sigma = 0.01;
  std::uint64_t seed = 1;
  // Fit guesses; 0 means "derive".
  double f_guess_hz = 0.0;
  double alpha_guess_over_pi = 0.0;
  std::string out_dir = ".";
  std::string format = "csv";
};

int cmd_ddfit(const DdfitOptions& options);

struct CompareOptions {
  analysis::ComparisonParams params;
  std::vector<double> n_nv_grid;  // empty: default log grid 1..1e4
  std::string out_dir = ".";
  std::string format = "csv";
};

int cmd_compare(const CompareOptions& options);

// Resolve the output directory: explicit flag > RECTDYNE_OUT_DIR > ".".
std::string resolve_out_dir(const std::string& flag_value);

}  // namespace rectdyne::cli
