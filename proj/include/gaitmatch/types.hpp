// Core dense types shared across the library. Everything is templated on the
// scalar so the engine can run in float on small targets and double on a desk
// machine; all shipped tools instantiate double.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaitmatch {

// Channel layout of one measurement frame. Order is fixed and load bearing:
// every kernel row, CSV column and profile entry follows it.
inline constexpr int kChannels = 4;
inline constexpr int kRightThigh = 0;
inline constexpr int kLeftThigh = 1;
inline constexpr int kRightShank = 2;
inline constexpr int kLeftShank = 3;

template <typename Scalar>
using Vec4 = Eigen::Matrix<Scalar, kChannels, 1>;

// 4 x N trajectory block, one column per time step.
template <typename Scalar>
using ChannelMatrix = Eigen::Matrix<Scalar, kChannels, Eigen::Dynamic>;

template <typename Scalar>
using ErrorVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Non-finite values trying to enter the engine or a metric.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violations of an on-disk file contract (bad header, bad row, bad metadata).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough input to produce a meaningful result (too few strides, ...).
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One time step of bilateral thigh/shank angles, degrees.
template <typename Scalar>
struct SampleFrame {
  std::int64_t t_index = 0;
  Vec4<Scalar> angles = Vec4<Scalar>::Zero();

  bool finite() const { return angles.allFinite(); }
};

// A stream of frames plus whatever side information travelled with it:
// optional foot-angle channels (used only for heel strike detection) and
// optional ground-truth labels (used for training and scoring).
template <typename Scalar>
struct LabeledStream {
  std::vector<SampleFrame<Scalar>> frames;

  // 2 x frames.size() when present (right foot, left foot), 2 x 0 otherwise.
  Eigen::Matrix<Scalar, 2, Eigen::Dynamic> foot_angles{2, 0};

  // Both empty or both frames.size() entries. phase_labels lie in (0, 1].
  std::vector<std::string> mode_labels;
  std::vector<double> phase_labels;

  bool has_foot() const { return foot_angles.cols() > 0; }
  bool has_labels() const { return !mode_labels.empty(); }
  std::size_t size() const { return frames.size(); }
};

}  // namespace gaitmatch
