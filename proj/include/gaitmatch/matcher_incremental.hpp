// Incremental matcher. Maintains, per mode, the error of every circular
// window and updates all of them in O(N) per step instead of O(N^2).
//
// Let e[j] be the error of the window ending at kernel column j (0-based
// here), and let q[j] = |d_i - col_j|^2 for the newest frame d_i. A window
// that ended at column j-1 one step ago, extended by d_i, is the window
// ending at column j now, except that its oldest term has fallen out. That
// oldest term is |d_{i-N} - col_j|^2: exactly the q[j] computed N steps ago.
// So
//
//     e_new[j] = e_old[j-1] + q[j] - s_cache[i mod N][j]
//     s_cache[i mod N][j] = q[j]
//
// with j-1 wrapping to N-1. The s_cache row for the current step residue is
// read before it is overwritten, which makes a frame history unnecessary:
// the cache of squared distances is the only state carried forward.
//
// Two cold starts are supported. `zeros` starts e and s_cache at zero; the
// recurrence then reproduces the rescan values once N real frames have
// arrived (and not before: during warm-up e[j] is the partial sum over the
// frames seen so far). `zero_history` starts e and s_cache at the values a
// rescan over an all-zero frame window would produce, which makes the two
// matchers agree at every step from the first frame on.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaitmatch/kernel.hpp"
#include "gaitmatch/prediction.hpp"
#include "gaitmatch/types.hpp"

namespace gaitmatch {

enum class WarmStart {
  zeros,         // e = 0, s_cache = 0
  zero_history,  // e, s_cache as if the window held zero-angle frames
};

struct MatcherConfig {
  WarmStart warm_start = WarmStart::zeros;
  // Every `resync_interval` steps, rebuild e from the cached squared
  // distances to shed accumulated rounding drift. 0 disables. The rebuild
  // needs no frame history: e[j] is a wrapped diagonal sum over s_cache.
  std::int64_t resync_interval = 0;
};

// Rolling per-mode matcher state: the error vector, the N x N cache of the
// last N squared-distance rows, and the step counter. Row r of s_cache holds
// the q vector of the most recent step whose index had residue r mod N.
template <typename Scalar>
struct ModeErrorState {
  std::string mode_id;
  ErrorVector<Scalar> e;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> s_cache;
  std::int64_t step_count = 0;

  ModeErrorState(const ModeKernel<Scalar>& kernel, WarmStart start)
      : mode_id(kernel.mode_id()),
        e(kernel.length()),
        s_cache(kernel.length(), kernel.length()),
        q_(kernel.length()) {
    reset(kernel, start);
  }

  void reset(const ModeKernel<Scalar>& kernel, WarmStart start) {
    if (kernel.mode_id() != mode_id)
      throw std::invalid_argument("matcher state: kernel mode mismatch");
    step_count = 0;
    if (start == WarmStart::zeros) {
      e.setZero();
      s_cache.setZero();
    } else {
      // Against an all-zero window every circular window sums every column,
      // so e is flat; each cache row is the per-column squared norm.
      q_ = kernel.columns().colwise().squaredNorm();
      e.setConstant(q_.sum());
      s_cache.rowwise() = q_;
    }
  }

  bool warm() const { return step_count >= e.size(); }
  std::size_t cache_bytes() const {
    return static_cast<std::size_t>(s_cache.size()) * sizeof(Scalar);
  }
  // All state this mode carries between steps; there is no frame storage.
  std::size_t state_bytes() const {
    return static_cast<std::size_t>(s_cache.size() + e.size() + q_.size()) *
           sizeof(Scalar);
  }

  // Fresh e from the cache: the term of the window ending at column j for
  // the frame t steps back sits at s_cache[(i-1-t) mod N][(j-t) mod N].
  void resynchronize() {
    const Eigen::Index n = e.size();
    const Eigen::Index head = (step_count % n + n - 1) % n;
    for (Eigen::Index j = 0; j < n; ++j) {
      Scalar acc = Scalar(0);
      Eigen::Index r = head;
      Eigen::Index c = j;
      for (Eigen::Index t = 0; t < n; ++t) {
        acc += s_cache(r, c);
        r = (r == 0) ? n - 1 : r - 1;
        c = (c == 0) ? n - 1 : c - 1;
      }
      e[j] = acc;
    }
  }

  template <typename S>
  friend void step_efficient(ModeErrorState<S>&, const ModeKernel<S>&,
                             const Vec4<S>&);

 private:
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> q_;  // scratch: newest distances
};

// One incremental update of a single mode. Throws before touching any state,
// so a rejected frame leaves the matcher where it was.
template <typename Scalar>
void step_efficient(ModeErrorState<Scalar>& state,
                    const ModeKernel<Scalar>& kernel,
                    const Vec4<Scalar>& sample) {
  if (kernel.mode_id() != state.mode_id)
    throw std::invalid_argument("step_efficient: kernel mode mismatch");
  if (kernel.length() != state.e.size())
    throw std::invalid_argument("step_efficient: kernel length mismatch");
  if (!sample.allFinite())
    throw DataError("step_efficient: non-finite sample");

  const Eigen::Index n = kernel.length();
  const Eigen::Index r = static_cast<Eigen::Index>(state.step_count % n);

  state.q_ = (kernel.columns().colwise() - sample).colwise().squaredNorm();
  // e_new[j] = e_old[j-1]: rotate right by one, then add q - cached row.
  std::rotate(state.e.data(), state.e.data() + n - 1, state.e.data() + n);
  state.e += (state.q_ - state.s_cache.row(r)).transpose();
  state.s_cache.row(r) = state.q_;
  ++state.step_count;
}

// Streaming engine over all modes. Holds no frame history; per mode it keeps
// only the rolling error vector and the squared-distance cache.
template <typename Scalar>
class IncrementalMatcher {
 public:
  explicit IncrementalMatcher(KernelSet<Scalar> kernels,
                              MatcherConfig config = {})
      : kernels_(std::move(kernels)), config_(config) {
    if (kernels_.empty())
      throw std::invalid_argument("matcher: kernel set is empty");
    states_.reserve(kernels_.size());
    for (const auto& k : kernels_)
      states_.emplace_back(k, config_.warm_start);
    for (const auto& s : states_) error_views_.push_back(&s.e);
  }

  const KernelSet<Scalar>& kernels() const { return kernels_; }
  const ModeErrorState<Scalar>& state(std::size_t m) const { return states_[m]; }
  std::int64_t steps() const { return steps_; }
  bool warm() const { return steps_ >= kernels_.max_length(); }

  std::size_t cache_bytes() const {
    std::size_t total = 0;
    for (const auto& s : states_) total += s.cache_bytes();
    return total;
  }
  std::size_t state_bytes() const {
    std::size_t total = 0;
    for (const auto& s : states_) total += s.state_bytes();
    return total;
  }

  Prediction<Scalar> step(const SampleFrame<Scalar>& frame) {
    if (!frame.finite())
      throw DataError("matcher: non-finite angles at t_index " +
                      std::to_string(frame.t_index));
    for (std::size_t m = 0; m < states_.size(); ++m) {
      auto& st = states_[m];
      step_efficient(st, kernels_[m], frame.angles);
      if (config_.resync_interval > 0 &&
          st.step_count % config_.resync_interval == 0)
        st.resynchronize();
    }
    ++steps_;
    return select_prediction(kernels_, error_views_, warm());
  }

  void reset() {
    for (std::size_t m = 0; m < states_.size(); ++m)
      states_[m].reset(kernels_[m], config_.warm_start);
    steps_ = 0;
  }

 private:
  KernelSet<Scalar> kernels_;
  MatcherConfig config_;
  std::vector<ModeErrorState<Scalar>> states_;
  std::vector<const ErrorVector<Scalar>*> error_views_;
  std::int64_t steps_ = 0;
};

template <typename Scalar>
std::vector<Prediction<Scalar>> run_efficient(
    const KernelSet<Scalar>& kernels,
    const std::vector<SampleFrame<Scalar>>& frames,
    MatcherConfig config = {}) {
  IncrementalMatcher<Scalar> matcher(kernels, config);
  std::vector<Prediction<Scalar>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(matcher.step(f));
  return out;
}

}  // namespace gaitmatch
