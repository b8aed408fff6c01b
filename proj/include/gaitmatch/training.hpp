// Kernel construction from recorded walking: heel strike detection by peak
// picking, stride segmentation, length normalization, per-phase averaging.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaitmatch/kernel.hpp"
#include "gaitmatch/types.hpp"

namespace gaitmatch {

struct PeakConfig {
  double min_separation_s = 0.5;   // two heel strikes can't be closer
  double min_prominence_deg = 5.0; // reject wiggles that don't stand out
};

// Indices of prominent local maxima, ascending. Prominence is the drop from
// the peak to the higher of the two valley floors that separate it from
// taller terrain (or from the signal edge). When two candidates sit closer
// than the separation, the taller one survives.
template <typename Scalar>
std::vector<Eigen::Index> detect_heel_strikes(
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& signal,
    double sample_rate_hz, const PeakConfig& cfg = {}) {
  if (!(sample_rate_hz > 0.0))
    throw std::invalid_argument("detect_heel_strikes: sample rate must be positive");
  if (!(cfg.min_separation_s > 0.0) || !(cfg.min_prominence_deg >= 0.0))
    throw std::invalid_argument("detect_heel_strikes: bad peak config");
  const Eigen::Index n = signal.size();
  const Eigen::Index sep =
      std::max<Eigen::Index>(1, static_cast<Eigen::Index>(
                                    std::llround(cfg.min_separation_s * sample_rate_hz)));
  if (n < 2 * sep)
    throw std::invalid_argument(
        "detect_heel_strikes: signal shorter than twice the minimum separation");
  if (!signal.allFinite())
    throw DataError("detect_heel_strikes: non-finite sample");

  // plateau-aware local maxima (candidate = plateau midpoint)
  std::vector<Eigen::Index> candidates;
  Eigen::Index i = 1;
  while (i + 1 <= n - 1) {
    if (signal[i - 1] < signal[i]) {
      Eigen::Index j = i;
      while (j + 1 < n && signal[j + 1] == signal[i]) ++j;
      if (j + 1 < n && signal[j + 1] < signal[i])
        candidates.push_back((i + j) / 2);
      i = j + 1;
    } else {
      ++i;
    }
  }

  std::vector<Eigen::Index> prominent;
  for (Eigen::Index p : candidates) {
    Scalar left_floor = signal[p];
    for (Eigen::Index x = p - 1; x >= 0; --x) {
      if (signal[x] > signal[p]) break;
      left_floor = std::min(left_floor, signal[x]);
    }
    Scalar right_floor = signal[p];
    for (Eigen::Index x = p + 1; x < n; ++x) {
      if (signal[x] > signal[p]) break;
      right_floor = std::min(right_floor, signal[x]);
    }
    const Scalar prominence = signal[p] - std::max(left_floor, right_floor);
    if (prominence >= static_cast<Scalar>(cfg.min_prominence_deg))
      prominent.push_back(p);
  }

  // enforce separation, taller peak wins (earlier index breaks ties)
  std::vector<Eigen::Index> by_height = prominent;
  std::stable_sort(by_height.begin(), by_height.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     if (signal[a] != signal[b]) return signal[a] > signal[b];
                     return a < b;
                   });
  std::vector<Eigen::Index> kept;
  for (Eigen::Index p : by_height) {
    bool ok = true;
    for (Eigen::Index q : kept)
      if (std::abs(static_cast<std::int64_t>(p - q)) < sep) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// Strides whose phase label restarts mark heel strikes; lets callers segment
// labeled recordings exactly where the ground truth says the cycle began.
template <typename Scalar>
std::vector<Eigen::Index> heel_strikes_from_labels(
    const LabeledStream<Scalar>& stream) {
  if (!stream.has_labels())
    throw std::invalid_argument("heel_strikes_from_labels: stream has no labels");
  std::vector<Eigen::Index> out;
  const auto& ph = stream.phase_labels;
  // index 0 counts when it sits within about one sample of the cycle origin
  if (ph.size() >= 2 && ph[0] < ph[1] && ph[0] <= 1.25 * (ph[1] - ph[0]))
    out.push_back(0);
  for (std::size_t i = 1; i < ph.size(); ++i)
    if (ph[i] < ph[i - 1]) out.push_back(static_cast<Eigen::Index>(i));
  return out;
}

// Slice frames into heel-strike-to-heel-strike blocks (4 x L matrices).
// Segments shorter than 4 samples are artifacts of imperfect detection and
// are dropped.
template <typename Scalar>
std::vector<ChannelMatrix<Scalar>> segment_strides(
    const std::vector<SampleFrame<Scalar>>& frames,
    const std::vector<Eigen::Index>& heel_strikes) {
  if (heel_strikes.size() < 2)
    throw InsufficientDataError("segment_strides: need at least 2 heel strikes");
  for (std::size_t i = 0; i < heel_strikes.size(); ++i) {
    if (heel_strikes[i] < 0 ||
        heel_strikes[i] >= static_cast<Eigen::Index>(frames.size()))
      throw std::invalid_argument("segment_strides: heel strike out of range");
    if (i > 0 && heel_strikes[i] <= heel_strikes[i - 1])
      throw std::invalid_argument("segment_strides: heel strikes must be strictly increasing");
  }

  std::vector<ChannelMatrix<Scalar>> out;
  for (std::size_t s = 0; s + 1 < heel_strikes.size(); ++s) {
    const Eigen::Index begin = heel_strikes[s];
    const Eigen::Index len = heel_strikes[s + 1] - begin;
    if (len < 4) continue;
    ChannelMatrix<Scalar> seg(kChannels, len);
    for (Eigen::Index t = 0; t < len; ++t)
      seg.col(t) = frames[static_cast<std::size_t>(begin + t)].angles;
    out.push_back(std::move(seg));
  }
  if (out.empty())
    throw InsufficientDataError("segment_strides: no usable stride between heel strikes");
  return out;
}

// Linear resampling of one stride onto n uniformly spaced points spanning
// the original first..last samples; endpoints are copied exactly, and
// n == L returns the input unchanged.
template <typename Scalar>
ChannelMatrix<Scalar> resample_stride(const ChannelMatrix<Scalar>& stride,
                                      Eigen::Index n) {
  const Eigen::Index len = stride.cols();
  if (len < 2) throw std::invalid_argument("resample_stride: stride too short");
  if (n < 2) throw std::invalid_argument("resample_stride: need at least 2 output samples");

  ChannelMatrix<Scalar> out(kChannels, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = static_cast<double>(k * (len - 1)) / static_cast<double>(n - 1);
    const Eigen::Index i0 = std::min<Eigen::Index>(static_cast<Eigen::Index>(x), len - 2);
    const double frac = x - static_cast<double>(i0);
    out.col(k) = stride.col(i0) * static_cast<Scalar>(1.0 - frac) +
                 stride.col(i0 + 1) * static_cast<Scalar>(frac);
  }
  return out;
}

// Average the strides into one kernel. The kernel length is the rounded mean
// stride length; every stride is resampled to it first. Column 1 of the
// result is the heel strike instant because every segment starts there.
template <typename Scalar>
ModeKernel<Scalar> build_kernel(const std::string& mode_id,
                                const std::vector<ChannelMatrix<Scalar>>& strides,
                                double sample_rate_hz) {
  if (strides.empty())
    throw InsufficientDataError("build_kernel: no strides");
  double mean_len = 0.0;
  for (const auto& s : strides) {
    if (s.rows() != kChannels)
      throw std::invalid_argument("build_kernel: stride must have 4 channels");
    mean_len += static_cast<double>(s.cols());
  }
  mean_len /= static_cast<double>(strides.size());
  const Eigen::Index n = static_cast<Eigen::Index>(std::llround(mean_len));
  if (n < 2) throw InsufficientDataError("build_kernel: strides too short");

  ChannelMatrix<Scalar> sum = ChannelMatrix<Scalar>::Zero(kChannels, n);
  for (const auto& s : strides) sum += resample_stride(s, n);
  sum /= static_cast<Scalar>(strides.size());
  return ModeKernel<Scalar>(mode_id, std::move(sum), sample_rate_hz);
}

}  // namespace gaitmatch
