#include "rectdyne/config.hpp"

#include <cstdlib>
#include <ctime>
#include <initializer_list>
#include <string>

#include "rectdyne/constants.hpp"
#include "rectdyne/errors.hpp"
#include "rectdyne/io.hpp"

namespace rectdyne::config {

using nlohmann::json;
using protocols::MemoryModel;
using protocols::PhotonSampling;
using protocols::Protocol;

namespace {

void require_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw config_error(path + " must be a JSON object");
}

// Fail-closed: every key present must be in the allowed list.
void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) throw config_error("unknown key " + path + "." + item.key());
  }
}

double get_number(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw config_error(path + "." + key + " must be a number");
  return it->get<double>();
}

double get_number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw config_error(path + "." + key + " must be a number");
  return it->get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  // Accept any integer representation as long as the value is non-negative
  // (a round-tripped int serializes as a signed integer).
  if (it == obj.end() || !it->is_number_integer() ||
      (!it->is_number_unsigned() && it->get<std::int64_t>() < 0))
    throw config_error(path + "." + key + " must be a non-negative integer");
  return it->get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw config_error(path + "." + key + " must be a string");
  return it->get<std::string>();
}

}  // namespace

protocols::ProtocolConfig parse_protocol_config(const json& doc) {
  require_object(doc, "config");
  check_keys(doc, "config", {"protocol", "signal", "geometry", "readout", "interaction", "run"});
  protocols::ProtocolConfig cfg;

  const std::string proto = get_string(doc, "config", "protocol");
  if (proto == "qdyne") cfg.protocol = Protocol::Qdyne;
  else if (proto == "ex_situ") cfg.protocol = Protocol::ExSitu;
  else if (proto == "in_situ") cfg.protocol = Protocol::InSitu;
  else throw config_error("config.protocol must be one of qdyne, ex_situ, in_situ");

  if (!doc.contains("signal")) throw config_error("config.signal is required");
  const json& sig = doc["signal"];
  require_object(sig, "signal");
  check_keys(sig, "signal", {"frequency_hz", "amplitude_tesla", "phase"});
  cfg.signal.frequency_hz = get_number(sig, "signal", "frequency_hz");
  cfg.signal.amplitude_tesla = get_number_or(sig, "signal", "amplitude_tesla", 0.0);
  if (sig.contains("phase")) {
    const json& ph = sig["phase"];
    if (ph.is_string() && ph.get<std::string>() == "random") {
      cfg.signal.phase_mode = signal::PhaseMode::RandomUniform;
    } else if (ph.is_number()) {
      cfg.signal.phase_mode = signal::PhaseMode::Fixed;
      cfg.signal.fixed_phase_rad = ph.get<double>();
    } else {
      throw config_error("signal.phase must be \"random\" or a number (radians)");
    }
  }

  if (!doc.contains("geometry")) throw config_error("config.geometry is required");
  const json& geo = doc["geometry"];
  require_object(geo, "geometry");
  check_keys(geo, "geometry",
             {"points_per_trace", "sample_interval_s", "pulse_spacing_s", "pulse_count",
              "sensing_time_s"});
  cfg.geometry.points_per_trace = get_count(geo, "geometry", "points_per_trace");
  cfg.geometry.sample_interval_s = get_number(geo, "geometry", "sample_interval_s");
  cfg.geometry.pulse_spacing_s = get_number(geo, "geometry", "pulse_spacing_s");
  cfg.geometry.pulse_count = static_cast<int>(get_count(geo, "geometry", "pulse_count"));
  cfg.geometry.sensing_time_s = get_number_or(geo, "geometry", "sensing_time_s", 0.0);

  if (!doc.contains("readout")) throw config_error("config.readout is required");
  const json& ro = doc["readout"];
  require_object(ro, "readout");
  check_keys(ro, "readout", {"mean_photons", "contrast", "noise"});
  cfg.readout.mean_photons = get_number(ro, "readout", "mean_photons");
  cfg.readout.contrast = get_number(ro, "readout", "contrast");
  const std::string noise =
      ro.contains("noise") ? get_string(ro, "readout", "noise") : std::string("poisson");
  if (noise == "poisson") cfg.readout.noise_mode = signal::NoiseMode::Poisson;
  else if (noise == "gaussian") cfg.readout.noise_mode = signal::NoiseMode::Gaussian;
  else throw config_error("readout.noise must be poisson or gaussian");

  bool have_alpha = false;
  if (doc.contains("interaction")) {
    const json& ia = doc["interaction"];
    require_object(ia, "interaction");
    check_keys(ia, "interaction",
               {"alpha_rad", "alpha_over_pi", "gyromagnetic_hz_per_t", "detuning_hz"});
    if (ia.contains("alpha_rad") && ia.contains("alpha_over_pi"))
      throw config_error("interaction.alpha_rad and interaction.alpha_over_pi are exclusive");
    cfg.interaction.gyromagnetic_hz_per_t = get_number_or(
        ia, "interaction", "gyromagnetic_hz_per_t", constants::kElectronGyromagneticHzPerT);
    cfg.interaction.detuning_hz = get_number_or(ia, "interaction", "detuning_hz", 0.0);
    if (ia.contains("alpha_rad")) {
      cfg.interaction.alpha_rad = get_number(ia, "interaction", "alpha_rad");
      have_alpha = true;
    } else if (ia.contains("alpha_over_pi")) {
      cfg.interaction.alpha_rad = constants::kPi * get_number(ia, "interaction", "alpha_over_pi");
      have_alpha = true;
    }
  }
  if (!have_alpha) {
    // Derive from the field amplitude and the sensing time.
    const double tau_sens = cfg.geometry.effective_sensing_time();
    if (!(cfg.signal.amplitude_tesla > 0.0) || !(tau_sens > 0.0))
      throw config_error(
          "interaction strength unspecified: set interaction.alpha_rad / alpha_over_pi or a "
          "positive signal.amplitude_tesla with valid geometry");
    cfg.interaction.alpha_rad = physics::alpha_from_field(
        cfg.signal.amplitude_tesla, tau_sens, cfg.interaction.gyromagnetic_hz_per_t);
  }

  if (!doc.contains("run")) throw config_error("config.run is required");
  const json& run = doc["run"];
  require_object(run, "run");
  check_keys(run, "run",
             {"n_traces", "charge_infidelity", "init_success_prob", "alpha_sigma_rad",
              "master_seed", "memory_model", "photon_sampling", "sequence_time_s"});
  cfg.n_traces = get_count(run, "run", "n_traces");
  cfg.charge_infidelity = get_number_or(run, "run", "charge_infidelity", 0.0);
  cfg.init_success_prob = get_number_or(run, "run", "init_success_prob", 1.0);
  cfg.alpha_sigma_rad = get_number_or(run, "run", "alpha_sigma_rad", 0.0);
  cfg.master_seed = run.contains("master_seed") ? get_count(run, "run", "master_seed") : 1;
  if (run.contains("memory_model")) {
    const std::string mm = get_string(run, "run", "memory_model");
    if (mm == "phase_projection") cfg.memory_model = MemoryModel::PhaseProjection;
    else if (mm == "binary_channel") cfg.memory_model = MemoryModel::BinaryChannel;
    else throw config_error("run.memory_model must be phase_projection or binary_channel");
  }
  if (run.contains("photon_sampling")) {
    const std::string ps = get_string(run, "run", "photon_sampling");
    if (ps == "rate") cfg.photon_sampling = PhotonSampling::Rate;
    else if (ps == "projective") cfg.photon_sampling = PhotonSampling::Projective;
    else throw config_error("run.photon_sampling must be rate or projective");
  }
  cfg.sequence_time_s = get_number_or(run, "run", "sequence_time_s", 0.0);

  cfg.validate();
  return cfg;
}

json protocol_config_to_json(const protocols::ProtocolConfig& cfg) {
  json doc;
  switch (cfg.protocol) {
    case Protocol::Qdyne: doc["protocol"] = "qdyne"; break;
    case Protocol::ExSitu: doc["protocol"] = "ex_situ"; break;
    case Protocol::InSitu: doc["protocol"] = "in_situ"; break;
  }
  doc["signal"] = {{"frequency_hz", cfg.signal.frequency_hz},
                   {"amplitude_tesla", cfg.signal.amplitude_tesla}};
  if (cfg.signal.phase_mode == signal::PhaseMode::RandomUniform)
    doc["signal"]["phase"] = "random";
  else
    doc["signal"]["phase"] = cfg.signal.fixed_phase_rad;
  doc["geometry"] = {{"points_per_trace", cfg.geometry.points_per_trace},
                     {"sample_interval_s", cfg.geometry.sample_interval_s},
                     {"pulse_spacing_s", cfg.geometry.pulse_spacing_s},
                     {"pulse_count", cfg.geometry.pulse_count},
                     {"sensing_time_s", cfg.geometry.effective_sensing_time()}};
  doc["readout"] = {
      {"mean_photons", cfg.readout.mean_photons},
      {"contrast", cfg.readout.contrast},
      {"noise", cfg.readout.noise_mode == signal::NoiseMode::Poisson ? "poisson" : "gaussian"}};
  doc["interaction"] = {{"alpha_rad", cfg.interaction.alpha_rad},
                        {"gyromagnetic_hz_per_t", cfg.interaction.gyromagnetic_hz_per_t},
                        {"detuning_hz", cfg.interaction.detuning_hz}};
  doc["run"] = {
      {"n_traces", cfg.n_traces},
      {"charge_infidelity", cfg.charge_infidelity},
      {"init_success_prob", cfg.init_success_prob},
      {"alpha_sigma_rad", cfg.alpha_sigma_rad},
      {"master_seed", cfg.master_seed},
      {"memory_model",
       cfg.memory_model == MemoryModel::PhaseProjection ? "phase_projection" : "binary_channel"},
      {"photon_sampling",
       cfg.photon_sampling == PhotonSampling::Rate ? "rate" : "projective"},
      {"sequence_time_s", cfg.effective_sequence_time()}};
  return doc;
}

std::string config_hash(const json& canonical) { return io::fnv1a64_hex(canonical.dump()); }

json make_manifest(const std::string& command, const json& canonical_config,
                   const std::vector<std::string>& outputs) {
  json manifest;
  manifest["command"] = command;
  manifest["tool_version"] = kToolVersion;
  manifest["config"] = canonical_config;
  manifest["config_hash"] = config_hash(canonical_config);
  if (canonical_config.contains("run") && canonical_config["run"].contains("master_seed"))
    manifest["master_seed"] = canonical_config["run"]["master_seed"];
  manifest["outputs"] = outputs;

  std::time_t stamp = 0;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    stamp = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    stamp = std::time(nullptr);
  }
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&stamp, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  manifest["generated_at"] = buf;
  return manifest;
}

}  // namespace rectdyne::config
