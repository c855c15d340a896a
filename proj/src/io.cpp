#include "rectdyne/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "rectdyne/errors.hpp"

namespace rectdyne::io {

namespace {

constexpr char kMagic[4] = {'R', 'Q', 'H', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::string& buf, T value) {
  static_assert(std::is_integral_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double value) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, sizeof bits);
  put_le(buf, bits);
}

template <typename T>
T get_le(const std::string& buf, std::size_t& pos) {
  if (pos + sizeof(T) > buf.size()) throw io_error("trace file truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  pos += sizeof(T);
  return static_cast<T>(v);
}

double get_f64(const std::string& buf, std::size_t& pos) {
  const std::uint64_t bits = get_le<std::uint64_t>(buf, pos);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw io_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("read failed: " + path);
  return ss.str();
}

nlohmann::json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TraceFileWriter::TraceFileWriter(const std::string& path, const std::string& header_json,
                                 std::uint64_t n_traces, std::uint64_t points_per_trace,
                                 CountDType dtype)
    : out_(path, std::ios::binary | std::ios::trunc),
      path_(path),
      expected_(n_traces),
      m_(points_per_trace),
      dtype_(dtype) {
  if (!out_) throw io_error("cannot open for writing: " + path);
  std::string head;
  head.append(kMagic, 4);
  put_le(head, kVersion);
  head.push_back(static_cast<char>(dtype));
  head.append(3, '\0');
  put_le(head, n_traces);
  put_le(head, points_per_trace);
  put_le(head, static_cast<std::uint64_t>(header_json.size()));
  head += header_json;
  out_.write(head.data(), static_cast<std::streamsize>(head.size()));
  if (!out_) throw io_error("write failed: " + path);
}

void TraceFileWriter::append(const protocols::PhotonTrace& trace) {
  if (closed_) throw io_error("trace file already closed: " + path_);
  if (trace.counts.size() != m_) throw io_error("trace length mismatch in " + path_);
  std::string rec;
  rec.reserve(12 + m_ * (dtype_ == CountDType::U16 ? 2 : 8));
  put_f64(rec, trace.initial_phase);
  rec.push_back(static_cast<char>(trace.memory_outcome));
  rec.push_back(trace.charge_ok ? 1 : 0);
  rec.push_back(trace.kept ? 1 : 0);
  rec.push_back(static_cast<char>(trace.rectify_sign));
  if (dtype_ == CountDType::U16) {
    for (double c : trace.counts) {
      if (!(c >= 0.0 && c <= 65535.0 && c == std::floor(c)))
        throw io_error("count not representable as uint16 in " + path_);
      put_le(rec, static_cast<std::uint16_t>(c));
    }
  } else {
    for (double c : trace.counts) put_f64(rec, c);
  }
  out_.write(rec.data(), static_cast<std::streamsize>(rec.size()));
  if (!out_) throw io_error("write failed: " + path_);
  ++written_;
}

void TraceFileWriter::close() {
  if (closed_) return;
  closed_ = true;
  if (written_ != expected_)
    throw io_error("trace count mismatch in " + path_ + ": expected " +
                   std::to_string(expected_) + ", wrote " + std::to_string(written_));
  out_.flush();
  if (!out_) throw io_error("flush failed: " + path_);
  out_.close();
}

TraceFileWriter::~TraceFileWriter() {
  try {
    close();
  } catch (...) {
    // Destructor must not throw; close() explicitly to observe errors.
  }
}

TraceFileContents read_trace_file(const std::string& path) {
  const std::string buf = read_text_file(path);
  std::size_t pos = 0;
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw io_error("not a trace file: " + path);
  pos = 4;
  const auto version = get_le<std::uint32_t>(buf, pos);
  if (version != kVersion) throw io_error("unsupported trace file version in " + path);
  const auto dtype_raw = get_le<std::uint8_t>(buf, pos);
  if (dtype_raw > 1) throw io_error("unknown count dtype in " + path);
  pos += 3;  // reserved
  const auto n = get_le<std::uint64_t>(buf, pos);
  const auto m = get_le<std::uint64_t>(buf, pos);
  const auto header_len = get_le<std::uint64_t>(buf, pos);
  if (pos + header_len > buf.size()) throw io_error("trace file truncated: " + path);

  TraceFileContents contents;
  contents.dtype = static_cast<CountDType>(dtype_raw);
  contents.header_json = buf.substr(pos, header_len);
  pos += header_len;
  contents.traces.resize(n);
  for (auto& t : contents.traces) {
    t.initial_phase = get_f64(buf, pos);
    t.memory_outcome = static_cast<protocols::MemoryOutcome>(get_le<std::uint8_t>(buf, pos));
    t.charge_ok = get_le<std::uint8_t>(buf, pos) != 0;
    t.kept = get_le<std::uint8_t>(buf, pos) != 0;
    t.rectify_sign = static_cast<std::int8_t>(get_le<std::uint8_t>(buf, pos));
    t.counts.resize(m);
    if (contents.dtype == CountDType::U16) {
      for (auto& c : t.counts) c = static_cast<double>(get_le<std::uint16_t>(buf, pos));
    } else {
      for (auto& c : t.counts) c = get_f64(buf, pos);
    }
  }
  if (pos != buf.size()) throw io_error("trailing bytes in trace file: " + path);
  return contents;
}

std::string make_csv(const std::vector<std::string>& comment_lines,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& line : comment_lines) out += "# " + line + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ",";
    out += columns[i];
  }
  out += "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw io_error("make_csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace rectdyne::io
