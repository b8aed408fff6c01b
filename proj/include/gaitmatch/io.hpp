// File formats. Numbers are written with std::to_chars (shortest string
// that parses back to the identical value) and read with std::from_chars,
// so serialize -> parse -> serialize is byte-stable and locale-proof.
//
// Stream CSV:   t_index,theta_rth,theta_lth,theta_rsh,theta_lsh
//               [,theta_rft,theta_lft] [,mode,phase]
//               one row per sample, t_index strictly increasing integers.
// Kernel CSV:   three metadata comments (# mode=, # n=, # rate_hz=), then
//               n rows of 4 comma-separated degrees in channel order.
// Prediction CSV: t_index,mode,j_star,phase,warm, then one e_<mode> column
//               per kernel in set order (those carry 6 significant digits;
//               they are diagnostics, not archival values).
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "gaitmatch/kernel.hpp"
#include "gaitmatch/prediction.hpp"
#include "gaitmatch/types.hpp"

namespace gaitmatch {

namespace io_detail {

template <typename Number>
void append_number(std::string& out, Number v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

[[noreturn]] inline void fail(const std::string& what, std::size_t line) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

inline void check_label(const std::string& label, const char* who) {
  if (label.empty() || label.find(',') != std::string::npos ||
      label.find('\n') != std::string::npos || label.find('\r') != std::string::npos)
    throw std::invalid_argument(std::string(who) + ": mode label unusable in CSV: '" +
                                label + "'");
}

template <typename Number>
Number parse_number(std::string_view field, std::size_t line) {
  Number v{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    fail("bad number '" + std::string(field) + "'", line);
  if constexpr (std::is_floating_point_v<Number>) {
    if (!std::isfinite(v)) fail("non-finite value '" + std::string(field) + "'", line);
  }
  return v;
}

inline std::vector<std::string_view> split_fields(std::string_view row) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(row.substr(start));
      return out;
    }
    out.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
}

// getline that treats a trailing '\r' as line noise, not data
inline bool next_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace io_detail

template <typename Scalar>
void write_stream(const LabeledStream<Scalar>& stream, std::ostream& os) {
  const bool foot = stream.has_foot();
  const bool labels = stream.has_labels();
  if (foot && stream.foot_angles.cols() != static_cast<Eigen::Index>(stream.size()))
    throw std::invalid_argument("write_stream: foot block length mismatch");
  if (labels && (stream.mode_labels.size() != stream.size() ||
                 stream.phase_labels.size() != stream.size()))
    throw std::invalid_argument("write_stream: label block length mismatch");

  std::string out = "t_index,theta_rth,theta_lth,theta_rsh,theta_lsh";
  if (foot) out += ",theta_rft,theta_lft";
  if (labels) out += ",mode,phase";
  out += '\n';

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& f = stream.frames[i];
    io_detail::append_number(out, f.t_index);
    for (int c = 0; c < kChannels; ++c) {
      out += ',';
      io_detail::append_number(out, f.angles[c]);
    }
    if (foot) {
      for (int c = 0; c < 2; ++c) {
        out += ',';
        io_detail::append_number(out, stream.foot_angles(c, static_cast<Eigen::Index>(i)));
      }
    }
    if (labels) {
      io_detail::check_label(stream.mode_labels[i], "write_stream");
      const double ph = stream.phase_labels[i];
      if (!std::isfinite(ph) || ph <= 0.0 || ph > 1.0)
        throw std::invalid_argument("write_stream: phase label outside (0, 1]");
      out += ',';
      out += stream.mode_labels[i];
      out += ',';
      io_detail::append_number(out, ph);
    }
    out += '\n';
  }
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
}

template <typename Scalar>
LabeledStream<Scalar> read_stream(std::istream& is) {
  std::string line;
  std::size_t lineno = 1;
  if (!io_detail::next_line(is, line)) io_detail::fail("missing header", 1);

  bool foot = false, labels = false;
  const std::string base = "t_index,theta_rth,theta_lth,theta_rsh,theta_lsh";
  if (line == base) {
  } else if (line == base + ",theta_rft,theta_lft") {
    foot = true;
  } else if (line == base + ",mode,phase") {
    labels = true;
  } else if (line == base + ",theta_rft,theta_lft,mode,phase") {
    foot = labels = true;
  } else {
    io_detail::fail("unrecognized header '" + line + "'", 1);
  }
  const std::size_t width = 5 + (foot ? 2 : 0) + (labels ? 2 : 0);

  LabeledStream<Scalar> out;
  std::vector<Scalar> foot_vals;
  while (io_detail::next_line(is, line)) {
    ++lineno;
    if (line.empty()) io_detail::fail("empty row", lineno);
    auto fields = io_detail::split_fields(line);
    if (fields.size() != width)
      io_detail::fail("expected " + std::to_string(width) + " fields, got " +
                          std::to_string(fields.size()),
                      lineno);

    SampleFrame<Scalar> f;
    f.t_index = io_detail::parse_number<std::int64_t>(fields[0], lineno);
    if (!out.frames.empty() && f.t_index <= out.frames.back().t_index)
      io_detail::fail("t_index not strictly increasing", lineno);
    for (int c = 0; c < kChannels; ++c)
      f.angles[c] = io_detail::parse_number<Scalar>(fields[static_cast<std::size_t>(c) + 1], lineno);

    std::size_t at = 5;
    if (foot) {
      foot_vals.push_back(io_detail::parse_number<Scalar>(fields[at++], lineno));
      foot_vals.push_back(io_detail::parse_number<Scalar>(fields[at++], lineno));
    }
    if (labels) {
      if (fields[at].empty()) io_detail::fail("empty mode label", lineno);
      out.mode_labels.emplace_back(fields[at++]);
      const double phase = io_detail::parse_number<double>(fields[at++], lineno);
      if (phase <= 0.0 || phase > 1.0)
        io_detail::fail("phase outside (0, 1]", lineno);
      out.phase_labels.push_back(phase);
    }
    out.frames.push_back(f);
  }

  if (foot) {
    out.foot_angles.resize(2, static_cast<Eigen::Index>(out.frames.size()));
    for (std::size_t i = 0; i < out.frames.size(); ++i) {
      out.foot_angles(0, static_cast<Eigen::Index>(i)) = foot_vals[2 * i];
      out.foot_angles(1, static_cast<Eigen::Index>(i)) = foot_vals[2 * i + 1];
    }
  }
  return out;
}

template <typename Scalar>
void write_kernel(const ModeKernel<Scalar>& kernel, std::ostream& os) {
  std::string out = "# mode=" + kernel.mode_id() + "\n# n=";
  io_detail::append_number(out, kernel.length());
  out += "\n# rate_hz=";
  io_detail::append_number(out, kernel.sample_rate_hz());
  out += '\n';
  for (Eigen::Index j = 0; j < kernel.length(); ++j) {
    for (int c = 0; c < kChannels; ++c) {
      if (c) out += ',';
      io_detail::append_number(out, kernel.columns()(c, j));
    }
    out += '\n';
  }
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
}

template <typename Scalar>
ModeKernel<Scalar> read_kernel(std::istream& is) {
  std::string line;
  auto meta = [&](std::size_t lineno, const char* prefix) {
    if (!io_detail::next_line(is, line))
      io_detail::fail("missing metadata", lineno);
    const std::string_view sv(line);
    const std::string_view want(prefix);
    if (sv.substr(0, want.size()) != want)
      io_detail::fail("expected '" + std::string(prefix) + "...'", lineno);
    return std::string(sv.substr(want.size()));
  };
  const std::string mode = meta(1, "# mode=");
  if (mode.empty()) io_detail::fail("empty mode id", 1);
  const auto n = io_detail::parse_number<std::int64_t>(meta(2, "# n="), 2);
  if (n < 2) io_detail::fail("kernel length must be >= 2", 2);
  const auto rate = io_detail::parse_number<double>(meta(3, "# rate_hz="), 3);
  if (!(rate > 0.0)) io_detail::fail("rate must be positive", 3);

  ChannelMatrix<Scalar> cols(kChannels, static_cast<Eigen::Index>(n));
  std::size_t lineno = 3;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!io_detail::next_line(is, line))
      io_detail::fail("expected " + std::to_string(n) + " rows, got " +
                          std::to_string(j),
                      lineno + 1);
    ++lineno;
    auto fields = io_detail::split_fields(line);
    if (fields.size() != kChannels)
      io_detail::fail("expected 4 fields", lineno);
    for (int c = 0; c < kChannels; ++c)
      cols(c, j) = io_detail::parse_number<Scalar>(fields[static_cast<std::size_t>(c)], lineno);
  }
  if (io_detail::next_line(is, line))
    io_detail::fail("trailing data after " + std::to_string(n) + " rows", lineno + 1);
  return ModeKernel<Scalar>(mode, std::move(cols), rate);
}

// Prediction rows as read back from a prediction file.
struct PredictionRecord {
  std::int64_t t_index = 0;
  std::string mode_id;
  std::int64_t j_star = 0;
  double phase = 0.0;
  bool warm = false;
};

template <typename Scalar>
void write_predictions(const KernelSet<Scalar>& kernels,
                       const std::vector<SampleFrame<Scalar>>& frames,
                       const std::vector<Prediction<Scalar>>& preds,
                       std::ostream& os) {
  if (frames.size() != preds.size())
    throw std::invalid_argument("write_predictions: frame/prediction length mismatch");
  std::string out = "t_index,mode,j_star,phase,warm";
  for (const auto& k : kernels) out += ",e_" + k.mode_id();
  out += '\n';

  char buf[64];
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& p = preds[i];
    io_detail::check_label(p.mode_id, "write_predictions");
    io_detail::append_number(out, frames[i].t_index);
    out += ',';
    out += p.mode_id;
    out += ',';
    io_detail::append_number(out, static_cast<std::int64_t>(p.j_star));
    out += ',';
    io_detail::append_number(out, p.phase);
    out += ',';
    out += p.warm ? '1' : '0';
    for (Eigen::Index m = 0; m < p.min_error_per_mode.size(); ++m) {
      // exact-match streams leave ~1e-11 of accumulator noise in one matcher
      // and ~1e-28 in the other; both are zero at this column's resolution
      double e = static_cast<double>(p.min_error_per_mode[m]);
      if (std::abs(e) < 1e-6) e = 0.0;
      std::snprintf(buf, sizeof(buf), "%.6g", e);
      out += ',';
      out += buf;
    }
    out += '\n';
  }
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
}

inline std::vector<PredictionRecord> read_predictions(std::istream& is) {
  std::string line;
  if (!io_detail::next_line(is, line)) io_detail::fail("missing header", 1);
  const std::string prefix = "t_index,mode,j_star,phase,warm";
  if (line.substr(0, prefix.size()) != prefix)
    io_detail::fail("unrecognized header '" + line + "'", 1);
  std::size_t extra = 0;  // per-mode error columns, ignored here
  {
    auto fields = io_detail::split_fields(line);
    for (std::size_t i = 5; i < fields.size(); ++i) {
      if (fields[i].substr(0, 2) != "e_")
        io_detail::fail("unexpected column '" + std::string(fields[i]) + "'", 1);
      ++extra;
    }
  }

  std::vector<PredictionRecord> out;
  std::size_t lineno = 1;
  while (io_detail::next_line(is, line)) {
    ++lineno;
    auto fields = io_detail::split_fields(line);
    if (fields.size() != 5 + extra)
      io_detail::fail("expected " + std::to_string(5 + extra) + " fields", lineno);
    PredictionRecord r;
    r.t_index = io_detail::parse_number<std::int64_t>(fields[0], lineno);
    r.mode_id = std::string(fields[1]);
    if (r.mode_id.empty()) io_detail::fail("empty mode", lineno);
    r.j_star = io_detail::parse_number<std::int64_t>(fields[2], lineno);
    r.phase = io_detail::parse_number<double>(fields[3], lineno);
    if (fields[4] != "0" && fields[4] != "1")
      io_detail::fail("warm flag must be 0 or 1", lineno);
    r.warm = fields[4] == "1";
    for (std::size_t i = 5; i < fields.size(); ++i)
      io_detail::parse_number<double>(fields[i], lineno);  // validate only
    out.push_back(std::move(r));
  }
  return out;
}

// Path-based conveniences. Read failures name the file; format failures
// name the line (see io_detail::fail).
namespace io_detail {

inline std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open '" + path + "' for reading");
  return f;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace io_detail

template <typename Scalar>
LabeledStream<Scalar> read_stream_file(const std::string& path) {
  auto f = io_detail::open_in(path);
  try {
    return read_stream<Scalar>(f);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

template <typename Scalar>
void write_stream_file(const LabeledStream<Scalar>& stream, const std::string& path) {
  auto f = io_detail::open_out(path);
  write_stream(stream, f);
}

template <typename Scalar>
ModeKernel<Scalar> read_kernel_file(const std::string& path) {
  auto f = io_detail::open_in(path);
  try {
    return read_kernel<Scalar>(f);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

template <typename Scalar>
void write_kernel_file(const ModeKernel<Scalar>& kernel, const std::string& path) {
  auto f = io_detail::open_out(path);
  write_kernel(kernel, f);
}

inline std::vector<PredictionRecord> read_predictions_file(const std::string& path) {
  auto f = io_detail::open_in(path);
  try {
    return read_predictions(f);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace gaitmatch
