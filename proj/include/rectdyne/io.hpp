#pragma once

// File emission helpers: deterministic number formatting, CSV assembly, and
// the binary trace container.
//
// Trace file layout (little-endian, version 1):
//   bytes 0..3   magic "RQHT"
//   u32          version
//   u8           count dtype: 0 = uint16 (Poisson), 1 = double (Gaussian)
//   u8[3]        reserved (zero)
//   u64          n_traces
//   u64          points_per_trace
//   u64          header JSON length
//   ...          header JSON (canonical config echo)
//   per trace:   f64 initial_phase, u8 memory, u8 charge_ok, u8 kept,
//                i8 rectify_sign, counts[points_per_trace] in dtype

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rectdyne/protocols.hpp"

namespace rectdyne::io {

// Fixed "%.17g" formatting: round-trip exact and byte-stable.
std::string format_double(double value);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Parse a JSON document from disk; io_error when unreadable, config_error on
// malformed JSON.
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& doc);

// FNV-1a 64-bit digest as a 16-char lowercase hex string.
std::string fnv1a64_hex(const std::string& data);

enum class CountDType : std::uint8_t { U16 = 0, F64 = 1 };

class TraceFileWriter {
 public:
  TraceFileWriter(const std::string& path, const std::string& header_json,
                  std::uint64_t n_traces, std::uint64_t points_per_trace, CountDType dtype);
  void append(const protocols::PhotonTrace& trace);
  void close();  // flushes and validates the record count
  ~TraceFileWriter();

 private:
  std::ofstream out_;
  std::string path_;
  std::uint64_t expected_ = 0;
  std::uint64_t written_ = 0;
  std::uint64_t m_ = 0;
  CountDType dtype_;
  bool closed_ = false;
};

struct TraceFileContents {
  std::string header_json;
  CountDType dtype;
  std::vector<protocols::PhotonTrace> traces;
};

TraceFileContents read_trace_file(const std::string& path);

// CSV with '#'-prefixed metadata lines and one column-name row.
std::string make_csv(const std::vector<std::string>& comment_lines,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

}  // namespace rectdyne::io
