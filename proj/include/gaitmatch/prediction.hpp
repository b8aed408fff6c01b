// Prediction record and the shared argmin/phase mapping used by both matchers.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaitmatch/kernel.hpp"
#include "gaitmatch/types.hpp"

namespace gaitmatch {

// Output of one matching step. j_star is 1-based: j_star == N means the
// newest sample aligned with the end of the cycle, phase 1.0. phase is
// j_star / N, so it lies in (0, 1] with resolution 1/N.
template <typename Scalar>
struct Prediction {
  int mode_index = -1;
  std::string mode_id;
  Eigen::Index j_star = 0;  // 1-based kernel column of the best window end
  double phase = 0.0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> min_error_per_mode;  // kernel-set order
  bool warm = false;  // true once every mode has seen >= N_m samples
};

// Map a 1-based cycle position to a phase in (0, 1].
inline double phase_of(Eigen::Index j_star, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("phase_of: kernel length must be >= 1");
  if (j_star < 1 || j_star > n)
    throw std::invalid_argument("phase_of: j_star out of range 1..N");
  return static_cast<double>(j_star) / static_cast<double>(n);
}

namespace detail {

// Selection core shared by both matchers, so tie-breaking cannot diverge
// between them. `errors(m)` must yield mode m's error vector.
template <typename Scalar, typename GetErrors>
Prediction<Scalar> select_impl(const KernelSet<Scalar>& kernels,
                               GetErrors&& errors, std::size_t count,
                               bool warm) {
  if (kernels.empty() || count == 0)
    throw std::invalid_argument("select_prediction: no modes");
  if (count != kernels.size())
    throw std::invalid_argument("select_prediction: error vector count != mode count");

  Prediction<Scalar> out;
  out.warm = warm;
  out.min_error_per_mode.resize(static_cast<Eigen::Index>(kernels.size()));

  Scalar best = Scalar(0);
  for (std::size_t m = 0; m < kernels.size(); ++m) {
    const ErrorVector<Scalar>& e = errors(m);
    if (e.size() != kernels[m].length())
      throw std::invalid_argument("select_prediction: error vector length != kernel length");
    if (!e.allFinite())
      throw DataError("select_prediction: non-finite error for mode '" +
                      kernels[m].mode_id() + "'");

    Eigen::Index jmin = 0;
    const Scalar emin = e.minCoeff(&jmin);  // first occurrence -> smallest j
    out.min_error_per_mode[static_cast<Eigen::Index>(m)] =
        std::max(Scalar(0), emin);
    if (m == 0 || emin < best) {
      best = emin;
      out.mode_index = static_cast<int>(m);
      out.j_star = jmin + 1;
    }
  }
  out.mode_id = kernels[static_cast<std::size_t>(out.mode_index)].mode_id();
  out.phase = phase_of(out.j_star, kernels[static_cast<std::size_t>(out.mode_index)].length());
  return out;
}

}  // namespace detail

// Pick (mode, cycle position) with the smallest error. Ties go to the
// earlier mode in kernel-set order, then to the smaller j. Reported
// per-mode minima are floored at zero; the incremental matcher can sit a
// hair below zero after very long runs and that noise is not meaningful.
template <typename Scalar>
Prediction<Scalar> select_prediction(
    const KernelSet<Scalar>& kernels,
    const std::vector<ErrorVector<Scalar>>& per_mode_errors, bool warm) {
  return detail::select_impl<Scalar>(
      kernels,
      [&](std::size_t m) -> const ErrorVector<Scalar>& { return per_mode_errors[m]; },
      per_mode_errors.size(), warm);
}

// Zero-copy variant for callers whose error vectors live inside other state.
template <typename Scalar>
Prediction<Scalar> select_prediction(
    const KernelSet<Scalar>& kernels,
    const std::vector<const ErrorVector<Scalar>*>& per_mode_errors, bool warm) {
  return detail::select_impl<Scalar>(
      kernels,
      [&](std::size_t m) -> const ErrorVector<Scalar>& { return *per_mode_errors[m]; },
      per_mode_errors.size(), warm);
}

}  // namespace gaitmatch
