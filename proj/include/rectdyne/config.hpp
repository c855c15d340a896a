#pragma once

// JSON configuration: fail-closed parsing of ProtocolConfig (unknown keys are
// rejected with their path), a canonical echo with every effective field
// explicit, and the stable digest used by run manifests.

#include <string>

#include <json.hpp>

#include "rectdyne/protocols.hpp"

namespace rectdyne::config {

// Parse and validate; throws config_error naming the offending field.
// The interaction strength may be given directly (interaction.alpha_rad or
// interaction.alpha_over_pi) or derived from signal.amplitude_tesla and the
// sensing time; an explicit value wins.
protocols::ProtocolConfig parse_protocol_config(const nlohmann::json& doc);

// Canonical echo: all fields explicit, including derived ones. Parsing the
// echo reproduces the config exactly; its digest identifies the run.
nlohmann::json protocol_config_to_json(const protocols::ProtocolConfig& config);

// FNV-1a digest of the canonical serialization (keys sorted by nlohmann).
std::string config_hash(const nlohmann::json& canonical);

// Manifest for one CLI invocation. generated_at honors SOURCE_DATE_EPOCH
// (reproducible-builds convention) and falls back to the wall clock.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& canonical_config,
                             const std::vector<std::string>& outputs);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace rectdyne::config
