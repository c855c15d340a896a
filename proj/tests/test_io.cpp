#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rectdyne/config.hpp"
#include "rectdyne/constants.hpp"
#include "rectdyne/errors.hpp"
#include "rectdyne/io.hpp"
#include "rectdyne/protocols.hpp"

using namespace rectdyne;
using nlohmann::json;
using doctest::Approx;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / "rectdyne_io_test";
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

json sample_config() {
  return json::parse(R"({
    "protocol": "ex_situ",
    "signal": {"frequency_hz": 166663.6363636364, "phase": "random"},
    "geometry": {"points_per_trace": 64, "sample_interval_s": 2.75e-5,
                 "pulse_spacing_s": 3e-6, "pulse_count": 8},
    "readout": {"mean_photons": 0.057, "contrast": 0.30, "noise": "poisson"},
    "interaction": {"alpha_over_pi": 0.57},
    "run": {"n_traces": 10, "charge_infidelity": 0.3, "init_success_prob": 0.6,
            "master_seed": 42, "memory_model": "binary_channel"}
  })");
}

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e300, -2.75e-5, 0.0, 166663.6363636364}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(io::fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("text and json file round trips") {
  TempDir tmp;
  io::write_text_file(tmp.file("t.txt"), "hello\nworld\n");
  CHECK(io::read_text_file(tmp.file("t.txt")) == "hello\nworld\n");

  const json doc{{"b", 2}, {"a", 1}};
  io::write_json_file(tmp.file("d.json"), doc);
  CHECK(io::read_json_file(tmp.file("d.json")) == doc);

  CHECK_THROWS_AS(io::read_text_file(tmp.file("missing.txt")), io_error);
  CHECK_THROWS_AS(io::read_json_file(tmp.file("missing.json")), io_error);
  io::write_text_file(tmp.file("bad.json"), "{not json");
  CHECK_THROWS_AS(io::read_json_file(tmp.file("bad.json")), config_error);
}

TEST_CASE("make_csv layout") {
  const auto csv = io::make_csv({"note one"}, {"x", "y"}, {{1.0, 0.5}, {2.0, 0.25}});
  CHECK(csv == "# note one\nx,y\n1,0.5\n2,0.25\n");
}

TEST_CASE("trace file round trip") {
  TempDir tmp;
  std::vector<protocols::PhotonTrace> traces(3);
  traces[0].counts = {0, 1, 2, 3};
  traces[0].initial_phase = 0.25;
  traces[0].memory_outcome = protocols::MemoryOutcome::One;
  traces[0].rectify_sign = -1;
  traces[1].counts = {5, 0, 0, 65535};
  traces[1].kept = false;
  traces[2].counts = {1, 1, 2, 0};
  traces[2].charge_ok = false;

  SUBCASE("u16 counts") {
    const std::string path = tmp.file("traces_u16.bin");
    io::TraceFileWriter writer(path, R"({"k":1})", 3, 4, io::CountDType::U16);
    for (const auto& t : traces) {
      writer.append(t);
    }
    writer.close();
    const auto back = io::read_trace_file(path);
    CHECK(back.header_json == R"({"k":1})");
    CHECK(back.dtype == io::CountDType::U16);
    REQUIRE(back.traces.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back.traces[i].counts == traces[i].counts);
      CHECK(back.traces[i].initial_phase == traces[i].initial_phase);
      CHECK(back.traces[i].memory_outcome == traces[i].memory_outcome);
      CHECK(back.traces[i].charge_ok == traces[i].charge_ok);
      CHECK(back.traces[i].kept == traces[i].kept);
      CHECK(back.traces[i].rectify_sign == traces[i].rectify_sign);
    }
  }

  SUBCASE("f64 counts keep fractional values") {
    const std::string path = tmp.file("traces_f64.bin");
    io::TraceFileWriter writer(path, "{}", 1, 4, io::CountDType::F64);
    protocols::PhotonTrace t;
    t.counts = {0.25, -1.5, 3.75, 1e6};
    writer.append(t);
    writer.close();
    const auto back = io::read_trace_file(path);
    CHECK(back.traces[0].counts == t.counts);
  }

  SUBCASE("append validates the trace") {
    const std::string path = tmp.file("bad.bin");
    io::TraceFileWriter writer(path, "{}", 1, 4, io::CountDType::U16);
    protocols::PhotonTrace wrong_len;
    wrong_len.counts = {1, 2};
    CHECK_THROWS_AS(writer.append(wrong_len), io_error);
    protocols::PhotonTrace overflow;
    overflow.counts = {1, 2, 3, 70000};
    CHECK_THROWS_AS(writer.append(overflow), io_error);
  }

  SUBCASE("close checks the record count") {
    const std::string path = tmp.file("short.bin");
    io::TraceFileWriter writer(path, "{}", 2, 4, io::CountDType::U16);
    writer.append(traces[0]);
    CHECK_THROWS_AS(writer.close(), io_error);
  }

  SUBCASE("truncated file is rejected") {
    const std::string path = tmp.file("trunc.bin");
    {
      io::TraceFileWriter writer(path, "{}", 2, 4, io::CountDType::U16);
      writer.append(traces[0]);
      writer.append(traces[2]);
      writer.close();
    }
    auto bytes = io::read_text_file(path);
    bytes.resize(bytes.size() - 3);
    io::write_text_file(path, bytes);
    CHECK_THROWS_AS(io::read_trace_file(path), io_error);
  }
}

TEST_CASE("config parsing") {
  SUBCASE("valid config resolves derived fields") {
    const auto cfg = config::parse_protocol_config(sample_config());
    CHECK(cfg.protocol == protocols::Protocol::ExSitu);
    CHECK(cfg.interaction.alpha_rad == Approx(0.57 * constants::kPi).epsilon(1e-14));
    CHECK(cfg.memory_model == protocols::MemoryModel::BinaryChannel);
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.geometry.effective_sensing_time() == Approx(24e-6).epsilon(1e-12));
  }

  SUBCASE("unknown keys are rejected with their path") {
    auto doc = sample_config();
    doc["geometry"]["typo_key"] = 1;
    try {
      config::parse_protocol_config(doc);
      FAIL("expected config_error");
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("geometry.typo_key") != std::string::npos);
    }
    auto top = sample_config();
    top["bogus"] = true;
    CHECK_THROWS_AS(config::parse_protocol_config(top), config_error);
  }

  SUBCASE("alpha is exclusive with alpha_over_pi") {
    auto doc = sample_config();
    doc["interaction"]["alpha_rad"] = 1.0;
    CHECK_THROWS_AS(config::parse_protocol_config(doc), config_error);
  }

  SUBCASE("alpha can be derived from the field amplitude") {
    auto doc = sample_config();
    doc.erase("interaction");
    doc["signal"]["amplitude_tesla"] = 664e-9;
    const auto cfg = config::parse_protocol_config(doc);
    CHECK(cfg.interaction.alpha_rad / constants::kPi ==
          Approx(0.5689412845925835).epsilon(1e-12));
  }

  SUBCASE("missing sections are reported") {
    auto doc = sample_config();
    doc.erase("readout");
    CHECK_THROWS_AS(config::parse_protocol_config(doc), config_error);
  }

  SUBCASE("canonical echo is idempotent") {
    const auto cfg = config::parse_protocol_config(sample_config());
    const json canonical = config::protocol_config_to_json(cfg);
    const auto cfg2 = config::parse_protocol_config(canonical);
    const json canonical2 = config::protocol_config_to_json(cfg2);
    CHECK(canonical == canonical2);
    CHECK(config::config_hash(canonical) == config::config_hash(canonical2));
  }

  SUBCASE("hash ignores key order") {
    // nlohmann objects sort keys; two insertion orders serialize identically.
    json a{{"x", 1}, {"y", 2}};
    json b{{"y", 2}, {"x", 1}};
    CHECK(config::config_hash(a) == config::config_hash(b));
  }
}

TEST_CASE("manifest honors SOURCE_DATE_EPOCH") {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const json canonical{{"protocol", "qdyne"}, {"run", {{"master_seed", 7}}}};
  const auto manifest =
      config::make_manifest("simulate", canonical, {"b.json", "a.csv"});
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(manifest.at("command") == "simulate");
  CHECK(manifest.at("tool_version") == config::kToolVersion);
  CHECK(manifest.at("generated_at") == "2023-11-14T22:13:20Z");
  CHECK(manifest.at("config_hash") == config::config_hash(canonical));
  CHECK(manifest.at("master_seed") == 7);
  CHECK(manifest.at("outputs").is_array());
}
