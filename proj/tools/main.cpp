// rectdyne — Monte Carlo simulator and analysis toolkit for rectified
// quantum-heterodyne RF detection.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical/fit
// failure, 4 I/O failure.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rectdyne/commands.hpp"
#include "rectdyne/constants.hpp"
#include "rectdyne/errors.hpp"

namespace {

using rectdyne::cli::CommonOptions;

void add_common_options(CLI::App* cmd, CommonOptions& opt, bool with_traces) {
  cmd->add_option("--config", opt.config_path, "Protocol config JSON file")->required();
  cmd->add_option("--seed", opt.seed_override, "Override run.master_seed");
  cmd->add_option("--out-dir", opt.out_dir,
                  "Output directory (default: $RECTDYNE_OUT_DIR or '.')");
  cmd->add_option("--format", opt.format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--threads", opt.threads, "Worker threads for trace generation")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  cmd->add_flag_callback(
      "--no-mean-subtract", [&opt]() { opt.subtract_mean = false; },
      "Keep the sample mean (DC) in the transformed traces");
  if (with_traces) {
    cmd->add_flag_callback(
        "--skip-trace-file", [&opt]() { opt.write_traces = false; },
        "Do not write traces.bin");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulation and analysis of rectified quantum-heterodyne "
               "RF detection"};
  app.require_subcommand(1);

  CommonOptions sim_opt;
  sim_opt.out_dir.clear();
  CLI::App* sim = app.add_subcommand(
      "simulate", "Generate photon traces and the averaged power spectrum");
  add_common_options(sim, sim_opt, /*with_traces=*/true);

  rectdyne::cli::ScalingOptions scaling_opt;
  scaling_opt.common.out_dir.clear();
  CLI::App* scaling = app.add_subcommand(
      "scaling", "Measure SNR versus number of averaged traces and fit power laws");
  add_common_options(scaling, scaling_opt.common, /*with_traces=*/false);
  scaling->add_option("--n-grid", scaling_opt.n_grid,
                      "Ascending kept-trace counts to snapshot, e.g. 100,300,1000")
      ->required()
      ->delimiter(',');

  rectdyne::cli::FidelityOptions fid_opt;
  fid_opt.out_dir.clear();
  CLI::App* fid = app.add_subcommand(
      "fidelity", "Rectification fidelity, reduction factor k, and sweeps");
  double fid_alpha_over_pi = 0.0;
  double fid_sigma_over_pi = -1.0;
  fid->add_option("--alpha-rad", fid_opt.alpha_rad, "Rotation angle in radians");
  fid->add_option("--alpha-over-pi", fid_alpha_over_pi, "Rotation angle in units of pi");
  fid->add_option("--charge-infidelity", fid_opt.charge_infidelity,
                  "Probability of a sensing-blind charge state")
      ->capture_default_str();
  fid->add_option("--alpha-sigma-rad", fid_opt.alpha_sigma_rad,
                  "Ensemble spread of the rotation angle, radians");
  fid->add_option("--alpha-sigma-over-pi", fid_sigma_over_pi,
                  "Ensemble spread in units of pi");
  fid->add_flag("--sweep", fid_opt.sweep, "Also write a fidelity-vs-alpha sweep");
  fid->add_option("--sweep-min", fid_opt.sweep_alpha_min_over_pi,
                  "Sweep start, alpha/pi")->capture_default_str();
  fid->add_option("--sweep-max", fid_opt.sweep_alpha_max_over_pi,
                  "Sweep end, alpha/pi")->capture_default_str();
  fid->add_option("--sweep-points", fid_opt.sweep_points, "Sweep grid size")
      ->capture_default_str();
  fid->add_option("--out-dir", fid_opt.out_dir, "Output directory");
  fid->add_option("--format", fid_opt.format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  rectdyne::cli::DdfitOptions dd_opt;
  dd_opt.out_dir.clear();
  CLI::App* dd = app.add_subcommand(
      "ddfit", "Fit the DD lineshape to extract interaction strength and frequency");
  dd->add_option("--input", dd_opt.input_csv,
                 "Two-column sweep CSV (tau_s, signal); omit to synthesize one");
  dd->add_option("--alpha-over-pi", dd_opt.alpha_over_pi,
                 "True rotation angle for the synthetic sweep")->capture_default_str();
  dd->add_option("--f-target-hz", dd_opt.f_target_hz,
                 "True target frequency for the synthetic sweep")->capture_default_str();
  dd->add_option("--pulse-count", dd_opt.pulse_count, "DD pulse count N_p")
      ->capture_default_str();
  dd->add_option("--tau-min-s", dd_opt.tau_min_s, "Sweep start (0: auto)");
  dd->add_option("--tau-max-s", dd_opt.tau_max_s, "Sweep end (0: auto)");
  dd->add_option("--tau-points", dd_opt.tau_points, "Sweep grid size")
      ->capture_default_str();
  dd->add_option("--noise-sigma", dd_opt.noise_sigma,
                 "Gaussian noise added to the synthetic sweep")->capture_default_str();
  dd->add_option("--seed", dd_opt.seed, "Noise seed for the synthetic sweep")
      ->capture_default_str();
  dd->add_option("--f-guess-hz", dd_opt.f_guess_hz, "Frequency fit guess (0: derive)");
  dd->add_option("--alpha-guess-over-pi", dd_opt.alpha_guess_over_pi,
                 "Rotation-angle fit guess (0: multi-start default)");
  dd->add_option("--out-dir", dd_opt.out_dir, "Output directory");
  dd->add_option("--format", dd_opt.format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  rectdyne::cli::CompareOptions cmp_opt;
  cmp_opt.out_dir.clear();
  CLI::App* cmp = app.add_subcommand(
      "compare", "Relative-sensitivity curves across detection protocols");
  cmp->add_option("--contrast-ratio", cmp_opt.params.contrast_ratio,
                  "Ensemble/single contrast penalty")->capture_default_str();
  cmp->add_option("--rect-gain", cmp_opt.params.rect_gain,
                  "Single-sensor rectification gain")->capture_default_str();
  cmp->add_option("--reduction-k", cmp_opt.params.reduction_k,
                  "Amplitude reduction for correlation/CASR")->capture_default_str();
  cmp->add_option("--thermal-ratio", cmp_opt.params.thermal_ratio,
                  "Statistical/thermal polarization ratio")->capture_default_str();
  cmp->add_option("--trace-points", cmp_opt.params.trace_points, "Trace length m")
      ->capture_default_str();
  cmp->add_flag("--integer-lag", cmp_opt.params.integer_lag,
                "Round the correlation lag count (m+1)/2 down to 2000 at m=4000");
  cmp->add_option("--n-nv", cmp_opt.n_nv_grid,
                  "Sensor-count grid, e.g. 1,10,100 (default: log grid 1..1e4)")
      ->delimiter(',');
  cmp->add_option("--out-dir", cmp_opt.out_dir, "Output directory");
  cmp->add_option("--format", cmp_opt.format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      sim_opt.out_dir = rectdyne::cli::resolve_out_dir(sim_opt.out_dir);
      return rectdyne::cli::cmd_simulate(sim_opt);
    }
    if (scaling->parsed()) {
      scaling_opt.common.out_dir =
          rectdyne::cli::resolve_out_dir(scaling_opt.common.out_dir);
      return rectdyne::cli::cmd_scaling(scaling_opt);
    }
    if (fid->parsed()) {
      if (fid_alpha_over_pi > 0.0 && fid_opt.alpha_rad > 0.0) {
        throw rectdyne::config_error("give --alpha-rad or --alpha-over-pi, not both");
      }
      if (fid_alpha_over_pi > 0.0) {
        fid_opt.alpha_rad = fid_alpha_over_pi * rectdyne::constants::kPi;
      }
      if (fid_sigma_over_pi >= 0.0) {
        fid_opt.alpha_sigma_rad = fid_sigma_over_pi * rectdyne::constants::kPi;
      }
      fid_opt.out_dir = rectdyne::cli::resolve_out_dir(fid_opt.out_dir);
      return rectdyne::cli::cmd_fidelity(fid_opt);
    }
    if (dd->parsed()) {
      dd_opt.out_dir = rectdyne::cli::resolve_out_dir(dd_opt.out_dir);
      return rectdyne::cli::cmd_ddfit(dd_opt);
    }
    if (cmp->parsed()) {
      cmp_opt.out_dir = rectdyne::cli::resolve_out_dir(cmp_opt.out_dir);
      return rectdyne::cli::cmd_compare(cmp_opt);
    }
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const rectdyne::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const rectdyne::fit_error& e) {
    std::cerr << "fit error: " << e.what() << '\n';
    return 3;
  } catch (const rectdyne::io_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
