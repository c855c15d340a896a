#include "rectdyne/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "rectdyne/config.hpp"
#include "rectdyne/errors.hpp"
#include "rectdyne/fidelity.hpp"
#include "rectdyne/io.hpp"
#include "rectdyne/physics.hpp"
#include "rectdyne/protocols.hpp"
#include "rectdyne/rng.hpp"
#include "rectdyne/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rectdyne::cli {
namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw io_error("cannot create output directory '" + dir + "': " + ec.message());
  }
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Write a table of named columns as CSV (with '#' comment lines) or as a JSON
// object mapping column name -> array, depending on `format`.
std::string write_table(const std::string& dir, const std::string& stem,
                        const std::string& format,
                        const std::vector<std::string>& comments,
                        const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& column_data) {
  if (columns.size() != column_data.size()) {
    throw std::invalid_argument("write_table: column count mismatch");
  }
  if (format == "json") {
    json doc = json::object();
    for (const auto& c : comments) {
      doc["_comments"].push_back(c);
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      doc[columns[i]] = column_data[i];
    }
    const std::string name = stem + ".json";
    io::write_json_file(join_path(dir, name), doc);
    return name;
  }
  const std::size_t rows = column_data.empty() ? 0 : column_data.front().size();
  std::vector<std::vector<double>> row_major(rows, std::vector<double>(columns.size()));
  for (std::size_t c = 0; c < column_data.size(); ++c) {
    if (column_data[c].size() != rows) {
      throw std::invalid_argument("write_table: ragged columns");
    }
    for (std::size_t r = 0; r < rows; ++r) {
      row_major[r][c] = column_data[c][r];
    }
  }
  const std::string name = stem + ".csv";
  io::write_text_file(join_path(dir, name), io::make_csv(comments, columns, row_major));
  return name;
}

json snr_to_json(const spectral::SNREstimate& est) {
  return json{{"peak_bin", est.peak_bin},
              {"peak_power", est.peak_power},
              {"baseline_mean", est.baseline_mean},
              {"baseline_rms", est.baseline_rms},
              {"snr", est.snr},
              {"degenerate_noise_floor", est.degenerate_noise_floor}};
}

struct ExpectedBin {
  std::optional<std::size_t> bin;  // nullopt: fall back to arg-max search
  double aliased_frequency_hz = 0.0;
  double fractional_bin = 0.0;
  bool on_bin = false;
};

// Map the target frequency to a PSD bin of an m-point trace sampled at dt.
// Off-bin (or DC / Nyquist-exceeding) targets fall back to arg-max search.
ExpectedBin resolve_expected_bin(double frequency_hz, double dt, std::size_t m) {
  ExpectedBin out;
  const auto alias = signal::alias_frequency(frequency_hz, dt);
  out.aliased_frequency_hz = alias.frequency_hz;
  out.fractional_bin = alias.frequency_hz * static_cast<double>(m) * dt;
  const double rounded = std::round(out.fractional_bin);
  const auto nbins = static_cast<double>(m / 2 + 1);
  out.on_bin = std::abs(out.fractional_bin - rounded) < 1e-6 && rounded >= 1.0 &&
               rounded < nbins;
  if (out.on_bin) {
    out.bin = static_cast<std::size_t>(rounded);
  }
  return out;
}

void warn_off_bin(const ExpectedBin& eb) {
  if (!eb.on_bin) {
    std::cerr << "warning: aliased target frequency " << eb.aliased_frequency_hz
              << " Hz falls at fractional bin " << eb.fractional_bin
              << "; SNR peak search uses arg-max instead of a pinned bin\n";
  }
}

double kept_fraction(const protocols::RunSummary& summary) {
  if (summary.traces_generated == 0) {
    return 0.0;
  }
  return static_cast<double>(summary.traces_kept) /
         static_cast<double>(summary.traces_generated);
}

// Effective rectification-efficiency factor k implied by a protocol config
// (ensemble-averaged over the alpha distribution when alpha_sigma_rad > 0).
double config_reduction_factor(const protocols::ProtocolConfig& cfg) {
  const double f = fidelity::fidelity_alpha_ensemble(
      cfg.interaction.alpha_rad, cfg.alpha_sigma_rad, cfg.charge_infidelity);
  return fidelity::reduction_factor(f);
}

}  // namespace

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (const char* env = std::getenv("RECTDYNE_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

int cmd_simulate(const CommonOptions& options) {
  json doc = io::read_json_file(options.config_path);
  protocols::ProtocolConfig cfg = config::parse_protocol_config(doc);
  if (options.seed_override) {
    cfg.master_seed = *options.seed_override;
  }
  const json canonical = config::protocol_config_to_json(cfg);
  ensure_dir(options.out_dir);

  const std::size_t m = cfg.geometry.points_per_trace;
  const double dt = cfg.geometry.sample_interval_s;
  const bool coherent = cfg.protocol != protocols::Protocol::Qdyne;

  spectral::CoherentAverager coherent_avg(m, cfg.readout.mean_photons, dt,
                                          options.subtract_mean);
  spectral::IncoherentAverager incoherent_avg(m, dt, options.subtract_mean);

  std::vector<std::string> outputs;
  std::optional<io::TraceFileWriter> writer;
  if (options.write_traces) {
    const json header{{"config", canonical},
                      {"config_hash", config::config_hash(canonical)},
                      {"tool_version", config::kToolVersion}};
    writer.emplace(join_path(options.out_dir, "traces.bin"), header.dump(), cfg.n_traces, m,
                   cfg.readout.noise_mode == signal::NoiseMode::Poisson
                       ? io::CountDType::U16
                       : io::CountDType::F64);
    outputs.push_back("traces.bin");
  }

  const protocols::RunSummary summary = protocols::run_protocol(
      cfg,
      [&](std::uint64_t, protocols::PhotonTrace&& trace) {
        if (writer) {
          writer->append(trace);
        }
        if (coherent) {
          coherent_avg.add(trace);
        } else {
          incoherent_avg.add(trace);
        }
      },
      options.threads);
  if (writer) {
    writer->close();
  }

  const spectral::PSDSpectrum spectrum =
      coherent ? coherent_avg.spectrum() : incoherent_avg.spectrum();

  const ExpectedBin eb = resolve_expected_bin(cfg.signal.frequency_hz, dt, m);
  warn_off_bin(eb);
  const spectral::SNREstimate snr = spectral::estimate_snr(spectrum, eb.bin);

  const std::string hash = config::config_hash(canonical);
  std::vector<std::string> psd_comments{
      "mode: " + std::string(coherent ? "coherent" : "incoherent"),
      "n_averaged: " + std::to_string(spectrum.n_averaged), "config_hash: " + hash};
  outputs.push_back(write_table(options.out_dir, "psd", options.format, psd_comments,
                                {"frequency_hz", "power"},
                                {spectrum.bin_frequencies, spectrum.power}));

  if (coherent) {
    const std::vector<double> avg = coherent_avg.averaged_trace();
    std::vector<double> index(m);
    std::vector<double> time_s(m);
    for (std::size_t j = 0; j < m; ++j) {
      index[j] = static_cast<double>(j);
      time_s[j] = static_cast<double>(j) * dt;
    }
    outputs.push_back(write_table(options.out_dir, "averaged_trace", options.format,
                                  {"config_hash: " + hash}, {"index", "time_s", "value"},
                                  {index, time_s, avg}));
  }

  json snr_doc = snr_to_json(snr);
  snr_doc["expected_bin_pinned"] = eb.on_bin;
  snr_doc["aliased_frequency_hz"] = eb.aliased_frequency_hz;
  snr_doc["fractional_bin"] = eb.fractional_bin;
  io::write_json_file(join_path(options.out_dir, "snr.json"), snr_doc);
  outputs.push_back("snr.json");

  json summary_doc{{"traces_generated", summary.traces_generated},
                   {"traces_kept", summary.traces_kept},
                   {"kept_fraction", kept_fraction(summary)},
                   {"wall_model_time_s", summary.wall_model_time_s}};
  io::write_json_file(join_path(options.out_dir, "run_summary.json"), summary_doc);
  outputs.push_back("run_summary.json");

  std::sort(outputs.begin(), outputs.end());
  io::write_json_file(join_path(options.out_dir, "manifest.json"),
                      config::make_manifest("simulate", canonical, outputs));
  return 0;
}

int cmd_scaling(const ScalingOptions& options) {
  const CommonOptions& common = options.common;
  json doc = io::read_json_file(common.config_path);
  protocols::ProtocolConfig cfg = config::parse_protocol_config(doc);
  if (common.seed_override) {
    cfg.master_seed = *common.seed_override;
  }
  if (options.n_grid.size() < 3) {
    throw config_error("scaling requires an n-grid with at least 3 entries");
  }
  for (std::size_t i = 0; i < options.n_grid.size(); ++i) {
    if (options.n_grid[i] == 0) {
      throw config_error("scaling n-grid entries must be positive");
    }
    if (i > 0 && options.n_grid[i] <= options.n_grid[i - 1]) {
      throw config_error("scaling n-grid must be strictly ascending");
    }
  }
  const json canonical = config::protocol_config_to_json(cfg);
  ensure_dir(common.out_dir);

  const std::size_t m = cfg.geometry.points_per_trace;
  const double dt = cfg.geometry.sample_interval_s;
  const bool coherent = cfg.protocol != protocols::Protocol::Qdyne;
  const std::uint64_t target_kept = options.n_grid.back();

  spectral::CoherentAverager coherent_avg(m, cfg.readout.mean_photons, dt,
                                          common.subtract_mean);
  spectral::IncoherentAverager incoherent_avg(m, dt, common.subtract_mean);

  const ExpectedBin eb = resolve_expected_bin(cfg.signal.frequency_hz, dt, m);
  warn_off_bin(eb);

  std::vector<double> col_n;
  std::vector<double> col_snr;
  std::vector<double> col_peak;
  std::vector<double> col_base_mean;
  std::vector<double> col_base_rms;

  std::uint64_t kept = 0;
  std::uint64_t consumed = 0;
  std::size_t grid_index = 0;

  auto snapshot = [&]() {
    const spectral::PSDSpectrum spectrum =
        coherent ? coherent_avg.spectrum() : incoherent_avg.spectrum();
    const spectral::SNREstimate est = spectral::estimate_snr(spectrum, eb.bin);
    col_n.push_back(static_cast<double>(kept));
    col_snr.push_back(est.snr);
    col_peak.push_back(est.peak_power);
    col_base_mean.push_back(est.baseline_mean);
    col_base_rms.push_back(est.baseline_rms);
  };

  auto consume = [&](protocols::PhotonTrace&& trace) {
    if (kept == target_kept) {
      return;  // tail of the final chunk; ignore deterministically
    }
    ++consumed;
    const bool was_kept = trace.kept;
    if (coherent) {
      coherent_avg.add(trace);
    } else {
      incoherent_avg.add(trace);
    }
    if (was_kept) {
      ++kept;
      while (grid_index < options.n_grid.size() && kept == options.n_grid[grid_index]) {
        snapshot();
        ++grid_index;
      }
    }
  };

  // Chunked generation with deterministic consumption order, stopping once the
  // final grid point has been reached (see run_protocol for the same pattern).
  constexpr std::uint64_t kChunk = 64;
  const std::uint64_t budget = cfg.n_traces;
  if (common.threads <= 1) {
    for (std::uint64_t i = 0; i < budget && kept < target_kept; ++i) {
      consume(protocols::generate_trace(cfg, i));
    }
  } else {
    using Chunk = std::vector<protocols::PhotonTrace>;
    std::deque<std::future<Chunk>> window;
    std::uint64_t next_start = 0;
    auto launch = [&]() {
      if (next_start >= budget) {
        return false;
      }
      const std::uint64_t begin = next_start;
      const std::uint64_t end = std::min(begin + kChunk, budget);
      next_start = end;
      window.push_back(std::async(std::launch::async, [&cfg, begin, end]() {
        Chunk chunk;
        chunk.reserve(static_cast<std::size_t>(end - begin));
        for (std::uint64_t i = begin; i < end; ++i) {
          chunk.push_back(protocols::generate_trace(cfg, i));
        }
        return chunk;
      }));
      return true;
    };
    for (unsigned i = 0; i < common.threads; ++i) {
      if (!launch()) {
        break;
      }
    }
    while (!window.empty()) {
      Chunk chunk = window.front().get();
      window.pop_front();
      if (kept < target_kept) {
        for (auto& trace : chunk) {
          consume(std::move(trace));
        }
        if (kept < target_kept) {
          launch();
        }
      }
    }
  }

  if (kept < target_kept) {
    throw config_error("run.n_traces (" + std::to_string(budget) +
                       ") exhausted before collecting " + std::to_string(target_kept) +
                       " kept traces (got " + std::to_string(kept) + ")");
  }

  // Power-law fits over grid points with positive SNR (free and pinned).
  std::vector<double> fit_n;
  std::vector<double> fit_snr;
  for (std::size_t i = 0; i < col_n.size(); ++i) {
    if (col_snr[i] > 0.0 && col_snr[i] < spectral::kSnrSentinel) {
      fit_n.push_back(col_n[i]);
      fit_snr.push_back(col_snr[i]);
    }
  }
  const double pinned_exponent = coherent ? 1.0 : 0.5;

  json fits = json::object();
  auto fit_to_json = [](const analysis::ScalingFit& f) {
    return json{{"exponent", f.exponent},
                {"prefactor", f.prefactor},
                {"covariance", f.covariance},
                {"n_points", f.n_points},
                {"exponent_pinned", f.exponent_pinned}};
  };
  if (fit_n.size() >= 3) {
    fits["snr_free"] = fit_to_json(analysis::fit_power_law(fit_n, fit_snr));
    fits["snr_pinned"] =
        fit_to_json(analysis::fit_power_law_pinned(fit_n, fit_snr, pinned_exponent));
  } else {
    std::cerr << "warning: fewer than 3 grid points with positive SNR; "
                 "power-law fits skipped\n";
    fits["snr_free"] = nullptr;
    fits["snr_pinned"] = nullptr;
  }
  {
    std::vector<double> rms_n;
    std::vector<double> rms_v;
    for (std::size_t i = 0; i < col_n.size(); ++i) {
      if (col_base_rms[i] > 0.0) {
        rms_n.push_back(col_n[i]);
        rms_v.push_back(col_base_rms[i]);
      }
    }
    if (rms_n.size() >= 3) {
      fits["noise_free"] = fit_to_json(analysis::fit_power_law(rms_n, rms_v));
      fits["noise_pinned"] = fit_to_json(
          analysis::fit_power_law_pinned(rms_n, rms_v, coherent ? -1.0 : -0.5));
    } else {
      fits["noise_free"] = nullptr;
      fits["noise_pinned"] = nullptr;
    }
  }

  // Theory comparison at the largest grid point.
  const double k = coherent ? config_reduction_factor(cfg) : 0.0;
  const analysis::SnrPrediction prediction = analysis::predict_snr(
      coherent, cfg.readout.mean_photons, m, cfg.readout.contrast, k,
      static_cast<double>(target_kept));
  json theory{{"coherent", coherent},
              {"reduction_factor_k", k},
              {"predicted_snr_exact", prediction.exact},
              {"predicted_snr_leading", prediction.leading},
              {"measured_snr_at_max_n", col_snr.back()}};
  if (prediction.leading > 0.0) {
    theory["measured_over_leading"] = col_snr.back() / prediction.leading;
  }

  const std::string hash = config::config_hash(canonical);
  std::vector<std::string> outputs;
  outputs.push_back(write_table(
      common.out_dir, "snr_vs_n", common.format, {"config_hash: " + hash},
      {"n_kept", "snr", "peak_power", "baseline_mean", "baseline_rms"},
      {col_n, col_snr, col_peak, col_base_mean, col_base_rms}));

  json fit_doc{{"protocol", canonical.at("protocol")},
               {"pipeline", coherent ? "coherent" : "incoherent"},
               {"n_grid", options.n_grid},
               {"traces_consumed", consumed},
               {"fits", fits},
               {"theory", theory},
               {"config_hash", hash}};
  io::write_json_file(join_path(common.out_dir, "scaling_fits.json"), fit_doc);
  outputs.push_back("scaling_fits.json");

  std::sort(outputs.begin(), outputs.end());
  io::write_json_file(join_path(common.out_dir, "manifest.json"),
                      config::make_manifest("scaling", canonical, outputs));
  return 0;
}

int cmd_fidelity(const FidelityOptions& options) {
  if (!(options.alpha_rad > 0.0)) {
    throw config_error("fidelity requires a positive rotation angle");
  }
  ensure_dir(options.out_dir);

  const fidelity::FidelityReport report = fidelity::make_report(
      options.alpha_rad, options.charge_infidelity, options.alpha_sigma_rad);
  const double alpha_opt = fidelity::optimal_alpha();

  json report_doc{{"alpha_rad", report.alpha_rad},
                  {"alpha_over_pi", report.alpha_rad / constants::kPi},
                  {"charge_infidelity", report.charge_infidelity},
                  {"alpha_sigma_rad", report.alpha_sigma_rad},
                  {"f_shot_noise", report.f_shot_noise},
                  {"f_total", report.f_total},
                  {"binary_factor", report.binary_factor},
                  {"k", report.k},
                  {"psd_signal_loss", report.psd_signal_loss},
                  {"optimal_alpha_rad", alpha_opt},
                  {"optimal_alpha_over_pi", alpha_opt / constants::kPi}};
  io::write_json_file(join_path(options.out_dir, "fidelity.json"), report_doc);
  std::vector<std::string> outputs{"fidelity.json"};

  if (options.sweep) {
    if (options.sweep_points < 2 ||
        !(options.sweep_alpha_max_over_pi > options.sweep_alpha_min_over_pi) ||
        !(options.sweep_alpha_min_over_pi > 0.0)) {
      throw config_error("invalid fidelity sweep range");
    }
    std::vector<double> a_over_pi(options.sweep_points);
    std::vector<double> f_sn(options.sweep_points);
    std::vector<double> f_tot(options.sweep_points);
    std::vector<double> kcol(options.sweep_points);
    std::vector<double> loss(options.sweep_points);
    const double step = (options.sweep_alpha_max_over_pi - options.sweep_alpha_min_over_pi) /
                        static_cast<double>(options.sweep_points - 1);
    for (std::size_t i = 0; i < options.sweep_points; ++i) {
      const double ap = options.sweep_alpha_min_over_pi + step * static_cast<double>(i);
      const auto r = fidelity::make_report(ap * constants::kPi, options.charge_infidelity,
                                           options.alpha_sigma_rad);
      a_over_pi[i] = ap;
      f_sn[i] = r.f_shot_noise;
      f_tot[i] = r.f_total;
      kcol[i] = r.k;
      loss[i] = r.psd_signal_loss;
    }
    outputs.push_back(write_table(
        options.out_dir, "fidelity_sweep", options.format, {},
        {"alpha_over_pi", "f_shot_noise", "f_total", "k", "psd_signal_loss"},
        {a_over_pi, f_sn, f_tot, kcol, loss}));
  }

  {
    // Generic mapping from total fidelity to k and PSD signal loss.
    const std::size_t n = 201;
    std::vector<double> f(n);
    std::vector<double> bin(n);
    std::vector<double> kcol(n);
    std::vector<double> loss(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double fv = 0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(n - 1);
      f[i] = fv;
      bin[i] = fidelity::binary_factor(fv);
      kcol[i] = fidelity::reduction_factor(fv);
      loss[i] = 1.0 - bin[i] * bin[i];
    }
    outputs.push_back(write_table(options.out_dir, "k_vs_fidelity", options.format, {},
                                  {"fidelity", "binary_factor", "k", "psd_signal_loss"},
                                  {f, bin, kcol, loss}));
  }

  json params{{"alpha_rad", options.alpha_rad},
              {"charge_infidelity", options.charge_infidelity},
              {"alpha_sigma_rad", options.alpha_sigma_rad}};
  if (options.sweep) {
    params["sweep"] = json{{"alpha_min_over_pi", options.sweep_alpha_min_over_pi},
                           {"alpha_max_over_pi", options.sweep_alpha_max_over_pi},
                           {"points", options.sweep_points}};
  }
  std::sort(outputs.begin(), outputs.end());
  io::write_json_file(join_path(options.out_dir, "manifest.json"),
                      config::make_manifest("fidelity", params, outputs));
  return 0;
}

namespace {

// Parse a two-column numeric CSV (tau_s, signal); '#' lines and a non-numeric
// header row are skipped. strtod is used so that nan/inf tokens round-trip.
void parse_sweep_csv(const std::string& text, std::vector<double>& tau,
                     std::vector<double>& signal) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') {
      continue;
    }
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') {
        ch = ' ';
      }
    }
    const char* cursor = line.c_str();
    char* end = nullptr;
    const double a = std::strtod(cursor, &end);
    if (end == cursor) {
      continue;  // header or stray text
    }
    cursor = end;
    const double b = std::strtod(cursor, &end);
    if (end == cursor) {
      continue;
    }
    tau.push_back(a);
    signal.push_back(b);
  }
}

}  // namespace

int cmd_ddfit(const DdfitOptions& options) {
  ensure_dir(options.out_dir);
  std::vector<double> tau;
  std::vector<double> signal;
  std::vector<std::string> outputs;
  json params{{"pulse_count", options.pulse_count}};

  if (!options.input_csv.empty()) {
    parse_sweep_csv(io::read_text_file(options.input_csv), tau, signal);
    if (tau.size() < 5) {
      throw config_error("sweep file '" + options.input_csv +
                         "' has fewer than 5 usable rows");
    }
    params["input"] = options.input_csv;
  } else {
    if (!(options.f_target_hz > 0.0) || !(options.alpha_over_pi > 0.0) ||
        options.tau_points < 5) {
      throw config_error("invalid synthetic sweep parameters");
    }
    const double tau_res = 1.0 / (2.0 * options.f_target_hz);
    const double lo = options.tau_min_s > 0.0 ? options.tau_min_s : 0.75 * tau_res;
    const double hi = options.tau_max_s > 0.0 ? options.tau_max_s : 1.35 * tau_res;
    if (!(hi > lo) || !(lo > 0.0)) {
      throw config_error("invalid synthetic sweep spacing range");
    }
    tau.resize(options.tau_points);
    const double step = (hi - lo) / static_cast<double>(options.tau_points - 1);
    for (std::size_t i = 0; i < options.tau_points; ++i) {
      tau[i] = lo + step * static_cast<double>(i);
    }
    signal = physics::dd_lineshape(options.alpha_over_pi * constants::kPi,
                                   options.pulse_count, tau, options.f_target_hz);
    rng::RandomStream stream(options.seed);
    for (double& s : signal) {
      s += options.noise_sigma * stream.normal();
    }
    outputs.push_back(write_table(options.out_dir, "dd_sweep", options.format, {},
                                  {"tau_s", "signal"}, {tau, signal}));
    params["synthetic"] = json{{"alpha_over_pi", options.alpha_over_pi},
                               {"f_target_hz", options.f_target_hz},
                               {"tau_min_s", lo},
                               {"tau_max_s", hi},
                               {"tau_points", options.tau_points},
                               {"noise_sigma", options.noise_sigma},
                               {"seed", options.seed}};
  }

  double f_guess = options.f_guess_hz;
  if (!(f_guess > 0.0)) {
    if (options.input_csv.empty()) {
      f_guess = options.f_target_hz;
    } else {
      // Heuristic: the lineshape peaks where the pulse spacing is resonant.
      std::size_t imax = 0;
      for (std::size_t i = 1; i < signal.size(); ++i) {
        if (signal[i] > signal[imax]) {
          imax = i;
        }
      }
      f_guess = 1.0 / (2.0 * tau[imax]);
    }
  }
  const double alpha_guess = options.alpha_guess_over_pi > 0.0
                                 ? options.alpha_guess_over_pi * constants::kPi
                                 : 0.5 * constants::kPi;

  const analysis::LineshapeFit fit =
      analysis::fit_dd_lineshape(tau, signal, options.pulse_count, f_guess, alpha_guess);

  json fit_doc{{"alpha_rad", fit.alpha_rad},
               {"alpha_over_pi", fit.alpha_rad / constants::kPi},
               {"f_target_hz", fit.f_target_hz},
               {"covariance", fit.covariance},
               {"iterations", fit.iterations},
               {"rss", fit.rss},
               {"n_points", tau.size()},
               {"pulse_count", options.pulse_count},
               {"f_guess_hz", f_guess},
               {"alpha_guess_rad", alpha_guess}};
  io::write_json_file(join_path(options.out_dir, "ddfit.json"), fit_doc);
  outputs.push_back("ddfit.json");

  std::sort(outputs.begin(), outputs.end());
  io::write_json_file(join_path(options.out_dir, "manifest.json"),
                      config::make_manifest("ddfit", params, outputs));
  return 0;
}

int cmd_compare(const CompareOptions& options) {
  ensure_dir(options.out_dir);
  std::vector<double> grid = options.n_nv_grid;
  if (grid.empty()) {
    // Default: 25-point logarithmic grid over [1, 1e4].
    const std::size_t n = 25;
    grid.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      grid[i] = std::pow(10.0, 4.0 * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }
  for (double v : grid) {
    if (!(v > 0.0)) {
      throw config_error("comparison n_nv grid entries must be positive");
    }
  }

  const auto curves = analysis::comparison_curves(grid, options.params);

  json curves_doc = json::array();
  std::vector<std::string> outputs;
  for (const auto& curve : curves) {
    const std::string label = analysis::to_string(curve.label);
    outputs.push_back(write_table(options.out_dir, "comparison_" + label,
                                  options.format, {}, {"n_nv", "relative_snr"},
                                  {grid, curve.relative_snr}));
    curves_doc.push_back(json{{"label", label},
                              {"n_nv", grid},
                              {"relative_snr", curve.relative_snr}});
  }

  json params{{"contrast_ratio", options.params.contrast_ratio},
              {"rect_gain", options.params.rect_gain},
              {"reduction_k", options.params.reduction_k},
              {"thermal_ratio", options.params.thermal_ratio},
              {"trace_points", options.params.trace_points},
              {"integer_lag", options.params.integer_lag}};
  json combined{{"params", params}, {"curves", curves_doc}};
  io::write_json_file(join_path(options.out_dir, "comparison.json"), combined);
  outputs.push_back("comparison.json");

  std::sort(outputs.begin(), outputs.end());
  io::write_json_file(join_path(options.out_dir, "manifest.json"),
                      config::make_manifest("compare", params, outputs));
  return 0;
}

}  // namespace rectdyne::cli
