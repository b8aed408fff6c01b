// Reference matcher: every step, rescan all N circular windows per mode and
// sum squared channel distances over the full window. O(M * N^2) per step.
// It is the correctness oracle for the incremental matcher and the baseline
// side of the benchmarks.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "gaitmatch/history.hpp"
#include "gaitmatch/kernel.hpp"
#include "gaitmatch/prediction.hpp"
#include "gaitmatch/types.hpp"

namespace gaitmatch {

// Errors of all N windows of `kernel` against the most recent N frames.
// out[j] (0-based) is the summed squared distance of the window whose last
// column is kernel column j: the newest frame pairs with column j, the frame
// t steps back pairs with column (j - t) mod N.
template <typename Scalar>
ErrorVector<Scalar> naive_errors(const ModeKernel<Scalar>& kernel,
                                 const HistoryBuffer<Scalar>& history) {
  const Eigen::Index n = kernel.length();
  if (history.capacity() < n)
    throw std::invalid_argument("naive_errors: history shorter than kernel");

  ErrorVector<Scalar> out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Scalar acc = Scalar(0);
    for (Eigen::Index t = 0; t < n; ++t) {
      Eigen::Index col = j - t;
      if (col < 0) col += n;
      acc += (history.at_offset(t) - kernel.column(col)).squaredNorm();
    }
    out[j] = acc;
  }
  return out;
}

// Streaming wrapper around naive_errors: push a frame, rescan every mode,
// pick the best (mode, cycle position).
template <typename Scalar>
class NaiveMatcher {
 public:
  explicit NaiveMatcher(KernelSet<Scalar> kernels)
      : kernels_(std::move(kernels)),
        history_(kernels_.empty() ? 1 : kernels_.max_length()),
        errors_(kernels_.size()) {
    if (kernels_.empty())
      throw std::invalid_argument("matcher: kernel set is empty");
  }

  const KernelSet<Scalar>& kernels() const { return kernels_; }
  std::int64_t steps() const { return history_.pushed(); }

  bool warm() const { return history_.pushed() >= kernels_.max_length(); }

  Prediction<Scalar> step(const SampleFrame<Scalar>& frame) {
    if (!frame.finite())
      throw DataError("matcher: non-finite angles at t_index " +
                      std::to_string(frame.t_index));
    history_.push(frame.angles);
    for (std::size_t m = 0; m < kernels_.size(); ++m)
      errors_[m] = naive_errors(kernels_[m], history_);
    return select_prediction(kernels_, errors_, warm());
  }

  void reset() { history_.clear(); }

 private:
  KernelSet<Scalar> kernels_;
  HistoryBuffer<Scalar> history_;
  std::vector<ErrorVector<Scalar>> errors_;
};

template <typename Scalar>
std::vector<Prediction<Scalar>> run_naive(
    const KernelSet<Scalar>& kernels,
    const std::vector<SampleFrame<Scalar>>& frames) {
  NaiveMatcher<Scalar> matcher(kernels);
  std::vector<Prediction<Scalar>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(matcher.step(f));
  return out;
}

}  // namespace gaitmatch
