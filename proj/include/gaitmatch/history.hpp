// Fixed-capacity ring of recent frames, used only by the rescan matcher.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "gaitmatch/types.hpp"

namespace gaitmatch {

// Newest frame at offset 0. Slots start zero-filled, so reads during the
// first `capacity` pushes see zero angles; that is the defined cold-start
// content, not an error.
template <typename Scalar>
class HistoryBuffer {
 public:
  explicit HistoryBuffer(Eigen::Index capacity)
      : ring_(ChannelMatrix<Scalar>::Zero(kChannels, capacity)) {
    if (capacity < 1)
      throw std::invalid_argument("history: capacity must be >= 1");
  }

  Eigen::Index capacity() const { return ring_.cols(); }
  std::int64_t pushed() const { return pushed_; }

  void push(const Vec4<Scalar>& sample) {
    head_ = (head_ + 1) % ring_.cols();
    ring_.col(head_) = sample;
    ++pushed_;
  }

  // offset 0 = newest, offset capacity-1 = oldest retained slot.
  auto at_offset(Eigen::Index offset) const {
    if (offset < 0 || offset >= ring_.cols())
      throw std::invalid_argument("history: offset out of range");
    Eigen::Index i = head_ - offset;
    if (i < 0) i += ring_.cols();
    return ring_.col(i);
  }

  void clear() {
    ring_.setZero();
    head_ = ring_.cols() - 1;
    pushed_ = 0;
  }

 private:
  ChannelMatrix<Scalar> ring_;
  Eigen::Index head_ = -1;  // column of the newest sample; -1 before first push
  std::int64_t pushed_ = 0;
};

}  // namespace gaitmatch
