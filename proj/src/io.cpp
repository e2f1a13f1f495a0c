// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace ddtrack {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', '1'};

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw FormatError(std::string("CSI1 file truncated while reading ") + what);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw FormatError("malformed number '" + s + "' in CSV");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw FormatError("malformed integer '" + s + "' in CSV");
  return v;
}

void expect_line(std::istream& in, const std::string& expected, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(std::string("empty ") + what + " CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected)
    throw FormatError(std::string("unsupported ") + what + " CSV: expected '" + expected +
                      "', found '" + line + "'");
}

constexpr const char* kEstimatesHeader =
    "k,t_s,x_m,y_m,z_m,vx_mps,vy_mps,noise_var,planar_cov_trace_m2,ess,log_normalizer";
constexpr const char* kTruthHeader = "k,t_s,x_m,y_m,z_m,vx_mps,vy_mps,vz_mps";

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::uint64_t csi1_file_size(std::uint32_t anchors, std::uint32_t subcarriers,
                             std::uint64_t steps, bool with_truth) {
  const std::uint64_t header = 4 + 4 + 4 + 4 + 8 + 4 * 8 + std::uint64_t{anchors} * 3 * 8;
  const std::uint64_t body = steps * anchors * subcarriers * 8;
  const std::uint64_t truth = with_truth ? 1 + steps * 6 * 8 : 0;
  return header + body + truth;
}

void write_csi1(std::ostream& out, const CsiDataset& data) {
  const CsiMeta& meta = data.meta();
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kCsi1Version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.anchor_count()));
  put<std::uint32_t>(out, meta.subcarrier_count);
  put<std::uint64_t>(out, meta.step_count);
  put<double>(out, meta.carrier_hz);
  put<double>(out, meta.dt_s);
  put<double>(out, meta.freq0_hz);
  put<double>(out, meta.freq_spacing_hz);
  for (const Vec3& a : meta.anchors) {
    for (int c = 0; c < 3; ++c) put<double>(out, a[c]);
  }
  if constexpr (std::endian::native == std::endian::little) {
    const auto s = data.samples();
    out.write(reinterpret_cast<const char*>(s.data()),
              static_cast<std::streamsize>(s.size() * sizeof(cfloat)));
  } else {
    for (const cfloat& v : data.samples()) {
      put<float>(out, v.real());
      put<float>(out, v.imag());
    }
  }
  if (data.ground_truth) {
    put<std::uint8_t>(out, 1);
    const GroundTruthTrack& gt = *data.ground_truth;
    for (std::size_t k = 0; k < gt.size(); ++k) {
      for (int c = 0; c < 3; ++c) put<double>(out, gt.positions[k][c]);
      for (int c = 0; c < 3; ++c) put<double>(out, gt.velocities[k][c]);
    }
  }
  if (!out) throw IoError("failed writing CSI1 stream");
}

CsiDataset read_csi1(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("not a CSI1 file (bad magic)");
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kCsi1Version)
    throw FormatError("unsupported CSI1 version " + std::to_string(version));
  CsiMeta meta;
  const auto anchors = get<std::uint32_t>(in, "M");
  meta.subcarrier_count = get<std::uint32_t>(in, "N_f");
  meta.step_count = get<std::uint64_t>(in, "K");
  meta.carrier_hz = get<double>(in, "carrier_hz");
  meta.dt_s = get<double>(in, "dt_s");
  meta.freq0_hz = get<double>(in, "freq0_hz");
  meta.freq_spacing_hz = get<double>(in, "freq_spacing_hz");
  if (anchors == 0 || meta.subcarrier_count == 0)
    throw FormatError("CSI1 header declares no anchors or subcarriers");
  if (!(meta.dt_s > 0.0) || !std::isfinite(meta.carrier_hz))
    throw FormatError("CSI1 header has invalid timing or carrier");

  // reject sizes that cannot fit in the remaining stream before allocating
  const auto here = in.tellg();
  if (here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    const std::uint64_t remaining = static_cast<std::uint64_t>(end - here);
    const std::uint64_t needed = std::uint64_t{anchors} * 24 +
                                 meta.step_count * anchors * meta.subcarrier_count * 8;
    if (meta.step_count > remaining || needed > remaining)
      throw FormatError("CSI1 file truncated: header declares more data than present");
  }

  meta.anchors.resize(anchors);
  for (auto& a : meta.anchors) {
    for (int c = 0; c < 3; ++c) a[c] = get<double>(in, "anchor positions");
  }
  CsiDataset data(std::move(meta));
  if constexpr (std::endian::native == std::endian::little) {
    auto s = data.samples();
    const auto bytes = static_cast<std::streamsize>(s.size() * sizeof(cfloat));
    if (!in.read(reinterpret_cast<char*>(s.data()), bytes))
      throw FormatError("CSI1 file truncated in sample body");
  } else {
    for (cfloat& v : data.samples()) {
      const float re = get<float>(in, "samples");
      const float im = get<float>(in, "samples");
      v = cfloat(re, im);
    }
  }

  const int flag = in.get();
  if (flag == std::char_traits<char>::eof()) return data;
  if (flag == 1) {
    GroundTruthTrack gt;
    const std::uint64_t steps = data.meta().step_count;
    for (std::uint64_t k = 0; k < steps; ++k) {
      Vec3 p, v;
      for (int c = 0; c < 3; ++c) p[c] = get<double>(in, "ground truth");
      for (int c = 0; c < 3; ++c) v[c] = get<double>(in, "ground truth");
      gt.times.push_back(data.meta().time(k));
      gt.positions.push_back(p);
      gt.velocities.push_back(v);
    }
    data.ground_truth = std::move(gt);
  } else if (flag != 0) {
    throw FormatError("CSI1 ground-truth flag must be 0 or 1");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("CSI1 file has trailing bytes");
  return data;
}

void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
      writer(out);
      out.flush();
      if (!out) throw IoError("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
  } catch (const std::filesystem::filesystem_error& e) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write '" + path.string() + "': " + e.what());
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

void save_csi1(const std::filesystem::path& path, const CsiDataset& data) {
  write_file_atomically(path, [&](std::ostream& out) { write_csi1(out, data); });
}

CsiDataset load_csi1(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, std::ios::binary);
  return read_csi1(in);
}

void write_estimates_csv(std::ostream& out, const std::vector<TrackEstimate>& estimates) {
  out << kEstimatesTag << '\n' << kEstimatesHeader << '\n';
  for (const TrackEstimate& e : estimates) {
    out << e.step << ',' << format_double(e.time_s);
    for (int c = 0; c < kStateDim; ++c) out << ',' << format_double(e.mean[c]);
    out << ',' << format_double(e.planar_cov_trace()) << ',' << format_double(e.ess) << ','
        << format_double(e.log_normalizer) << '\n';
  }
}

std::vector<EstimateRow> read_estimates_csv(std::istream& in) {
  expect_line(in, kEstimatesTag, "estimates");
  expect_line(in, kEstimatesHeader, "estimates");
  std::vector<EstimateRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) throw FormatError("estimates CSV row has " + std::to_string(f.size()) + " fields");
    EstimateRow r;
    r.step = parse_int(f[0]);
    r.time_s = parse_double(f[1]);
    for (int c = 0; c < kStateDim; ++c) r.mean[c] = parse_double(f[2 + c]);
    r.planar_cov_trace = parse_double(f[8]);
    r.ess = parse_double(f[9]);
    r.log_normalizer = parse_double(f[10]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<EstimateRow> load_estimates_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, std::ios::in);
  return read_estimates_csv(in);
}

void write_truth_csv(std::ostream& out, const GroundTruthTrack& track) {
  out << kTruthTag << '\n' << kTruthHeader << '\n';
  for (std::size_t k = 0; k < track.size(); ++k) {
    out << k << ',' << format_double(track.times[k]);
    for (int c = 0; c < 3; ++c) out << ',' << format_double(track.positions[k][c]);
    for (int c = 0; c < 3; ++c) out << ',' << format_double(track.velocities[k][c]);
    out << '\n';
  }
}

GroundTruthTrack read_truth_csv(std::istream& in) {
  expect_line(in, kTruthTag, "truth");
  expect_line(in, kTruthHeader, "truth");
  GroundTruthTrack gt;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 8) throw FormatError("truth CSV row has " + std::to_string(f.size()) + " fields");
    if (parse_int(f[0]) != static_cast<std::int64_t>(gt.size()))
      throw FormatError("truth CSV steps must be consecutive from 0");
    gt.times.push_back(parse_double(f[1]));
    gt.positions.emplace_back(parse_double(f[2]), parse_double(f[3]), parse_double(f[4]));
    gt.velocities.emplace_back(parse_double(f[5]), parse_double(f[6]), parse_double(f[7]));
  }
  return gt;
}

GroundTruthTrack load_truth_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, std::ios::in);
  return read_truth_csv(in);
}

void write_errors_csv(std::ostream& out, const RunMetrics& run) {
  out << "# ddtrack-errors v1\n"
      << "k,t_s,planar_error_m,planar_cov_trace_m2\n";
  for (const StepRecord& r : run.records) {
    out << r.step << ',' << format_double(r.time_s) << ',' << format_double(r.error_m) << ','
        << format_double(r.planar_cov_trace) << '\n';
  }
}

void write_cdf_csv(std::ostream& out, const std::vector<std::pair<double, double>>& cdf) {
  out << "# ddtrack-cdf v1\n"
      << "planar_error_m,cumulative_frequency\n";
  for (const auto& [e, f] : cdf) out << format_double(e) << ',' << format_double(f) << '\n';
}

}  // namespace ddtrack
