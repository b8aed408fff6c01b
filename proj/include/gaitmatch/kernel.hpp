// Per-mode matching kernels: one averaged gait cycle per locomotion mode.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaitmatch/types.hpp"

namespace gaitmatch {

// A mode kernel is a 4 x N matrix whose columns sample one full gait cycle at
// the capture rate. Column 1 is the heel strike instant (the phase origin);
// column N is the last sample before the next heel strike. Matching treats the
// columns circularly, so the conceptual doubled matrix [k k] is never stored.
template <typename Scalar>
class ModeKernel {
 public:
  ModeKernel(std::string mode_id, ChannelMatrix<Scalar> columns,
             double sample_rate_hz)
      : mode_id_(std::move(mode_id)),
        columns_(std::move(columns)),
        sample_rate_hz_(sample_rate_hz) {
    if (mode_id_.empty()) throw std::invalid_argument("kernel: empty mode id");
    if (mode_id_.find_first_of(",\n\r") != std::string::npos)
      throw std::invalid_argument("kernel: mode id must not contain ',' or line breaks");
    if (columns_.cols() < 2)
      throw std::invalid_argument("kernel: need at least 2 columns");
    if (!columns_.allFinite())
      throw DataError("kernel: non-finite entry in '" + mode_id_ + "'");
    if (!(sample_rate_hz_ > 0.0))
      throw std::invalid_argument("kernel: sample rate must be positive");
  }

  const std::string& mode_id() const { return mode_id_; }
  Eigen::Index length() const { return columns_.cols(); }
  double sample_rate_hz() const { return sample_rate_hz_; }
  const ChannelMatrix<Scalar>& columns() const { return columns_; }

  // 0-based column access; circular index helpers live with the matchers.
  auto column(Eigen::Index j) const { return columns_.col(j); }

  // Finest phase change the matcher can report with this kernel.
  double phase_resolution() const {
    return 1.0 / static_cast<double>(columns_.cols());
  }

 private:
  std::string mode_id_;
  ChannelMatrix<Scalar> columns_;
  double sample_rate_hz_;
};

// Ordered set of kernels. Declaration order is part of the contract: it is
// the tie-break order during selection and the column order in reports.
template <typename Scalar>
class KernelSet {
 public:
  KernelSet() = default;

  void add(ModeKernel<Scalar> kernel) {
    for (const auto& k : kernels_)
      if (k.mode_id() == kernel.mode_id())
        throw std::invalid_argument("kernel set: duplicate mode id '" +
                                    kernel.mode_id() + "'");
    kernels_.push_back(std::move(kernel));
  }

  std::size_t size() const { return kernels_.size(); }
  bool empty() const { return kernels_.empty(); }
  const ModeKernel<Scalar>& operator[](std::size_t m) const { return kernels_[m]; }
  auto begin() const { return kernels_.begin(); }
  auto end() const { return kernels_.end(); }

  // Longest kernel in the set; 0 when empty.
  Eigen::Index max_length() const {
    Eigen::Index n = 0;
    for (const auto& k : kernels_) n = std::max(n, k.length());
    return n;
  }

  int index_of(const std::string& mode_id) const {
    for (std::size_t m = 0; m < kernels_.size(); ++m)
      if (kernels_[m].mode_id() == mode_id) return static_cast<int>(m);
    return -1;
  }

 private:
  std::vector<ModeKernel<Scalar>> kernels_;
};

}  // namespace gaitmatch
