// Scoring: mode confusion, circular phase error statistics, trace tables.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaitmatch/kernel.hpp"
#include "gaitmatch/prediction.hpp"
#include "gaitmatch/types.hpp"

namespace gaitmatch {

// Distance between two cycle positions on the unit circle, in [0, 0.5].
// Both arguments are phases in (0, 1].
inline double circular_phase_error(double predicted, double truth) {
  if (!std::isfinite(predicted) || !std::isfinite(truth))
    throw std::invalid_argument("circular_phase_error: non-finite phase");
  if (predicted <= 0.0 || predicted > 1.0 || truth <= 0.0 || truth > 1.0)
    throw std::invalid_argument("circular_phase_error: phase outside (0, 1]");
  const double d = std::abs(predicted - truth);
  return std::min(d, 1.0 - d);
}

// Phase error moments over one mode's correctly classified samples.
// stddev is the population deviation; count == 0 leaves all fields zero.
struct PhaseErrorStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double max = 0.0;
};

struct EvalResult {
  std::vector<std::string> mode_order;  // confusion rows (true) and cols (predicted)
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> confusion;
  std::int64_t total = 0;    // samples scored (warm-up excluded by default)
  std::int64_t correct = 0;
  double accuracy = 0.0;
  std::vector<PhaseErrorStats> phase;  // per mode_order entry, correct samples
  double misclassified_max_phase_error = 0.0;
  std::int64_t skipped_warmup = 0;
};

// Score predictions against ground truth, position-aligned. Phase stats are
// per true mode over correctly classified samples; misclassified samples
// contribute only their worst-case phase error, reported separately.
template <typename Scalar>
EvalResult score(const std::vector<Prediction<Scalar>>& preds,
                 const std::vector<std::string>& true_modes,
                 const std::vector<double>& true_phases,
                 bool exclude_warmup = true) {
  if (preds.size() != true_modes.size() || preds.size() != true_phases.size())
    throw std::invalid_argument("score: prediction/label length mismatch");

  EvalResult r;
  auto mode_slot = [&](const std::string& id) {
    for (std::size_t i = 0; i < r.mode_order.size(); ++i)
      if (r.mode_order[i] == id) return static_cast<Eigen::Index>(i);
    r.mode_order.push_back(id);
    return static_cast<Eigen::Index>(r.mode_order.size() - 1);
  };
  for (const auto& m : true_modes) mode_slot(m);
  for (const auto& p : preds) mode_slot(p.mode_id);

  const Eigen::Index k = static_cast<Eigen::Index>(r.mode_order.size());
  r.confusion.setZero(k, k);

  // two-pass stats: sums first, then squared deviations
  std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
  std::vector<double> sq(static_cast<std::size_t>(k), 0.0);
  r.phase.assign(static_cast<std::size_t>(k), PhaseErrorStats{});

  std::vector<double> errors(preds.size(), -1.0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (exclude_warmup && !preds[i].warm) {
      ++r.skipped_warmup;
      continue;
    }
    const Eigen::Index t = mode_slot(true_modes[i]);
    const Eigen::Index p = mode_slot(preds[i].mode_id);
    ++r.confusion(t, p);
    ++r.total;
    const double err = circular_phase_error(preds[i].phase, true_phases[i]);
    errors[i] = err;
    if (t == p) {
      ++r.correct;
      auto& st = r.phase[static_cast<std::size_t>(t)];
      ++st.count;
      st.max = std::max(st.max, err);
      sum[static_cast<std::size_t>(t)] += err;
    } else {
      r.misclassified_max_phase_error =
          std::max(r.misclassified_max_phase_error, err);
    }
  }

  for (std::size_t m = 0; m < r.phase.size(); ++m)
    if (r.phase[m].count > 0)
      r.phase[m].mean = sum[m] / static_cast<double>(r.phase[m].count);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (errors[i] < 0.0) continue;
    const Eigen::Index t = mode_slot(true_modes[i]);
    const Eigen::Index p = mode_slot(preds[i].mode_id);
    if (t == p) {
      const double d = errors[i] - r.phase[static_cast<std::size_t>(t)].mean;
      sq[static_cast<std::size_t>(t)] += d * d;
    }
  }
  for (std::size_t m = 0; m < r.phase.size(); ++m)
    if (r.phase[m].count > 0)
      r.phase[m].stddev = std::sqrt(sq[m] / static_cast<double>(r.phase[m].count));

  r.accuracy = r.total > 0
                   ? static_cast<double>(r.correct) / static_cast<double>(r.total)
                   : 0.0;
  return r;
}

template <typename Scalar>
EvalResult score(const std::vector<Prediction<Scalar>>& preds,
                 const LabeledStream<Scalar>& stream,
                 bool exclude_warmup = true) {
  if (!stream.has_labels())
    throw std::invalid_argument("score: stream has no labels");
  return score(preds, stream.mode_labels, stream.phase_labels, exclude_warmup);
}

// Row-per-step view of per-mode errors plus the decision, for plotting how
// the mode errors cross over during transitions. With as_rms the summed
// error e is shown as sqrt(e / (4 N_m)): the per-cell root mean square in
// degrees, comparable across kernels of different length.
struct TraceRow {
  std::int64_t t_index = 0;
  std::string mode_id;
  double phase = 0.0;
  std::vector<double> per_mode;  // kernel-set order
};

struct TraceTable {
  std::vector<std::string> mode_order;
  bool as_rms = false;
  std::vector<TraceRow> rows;
};

template <typename Scalar>
TraceTable trace(const KernelSet<Scalar>& kernels,
                 const std::vector<SampleFrame<Scalar>>& frames,
                 const std::vector<Prediction<Scalar>>& preds,
                 std::int64_t t_begin, std::int64_t t_end, bool as_rms = false) {
  if (frames.size() != preds.size())
    throw std::invalid_argument("trace: frame/prediction length mismatch");
  if (t_end < t_begin) throw std::invalid_argument("trace: empty window");

  TraceTable table;
  table.as_rms = as_rms;
  for (const auto& k : kernels) table.mode_order.push_back(k.mode_id());

  for (std::size_t i = 0; i < preds.size(); ++i) {
    const std::int64_t t = frames[i].t_index;
    if (t < t_begin || t > t_end) continue;
    TraceRow row;
    row.t_index = t;
    row.mode_id = preds[i].mode_id;
    row.phase = preds[i].phase;
    row.per_mode.resize(kernels.size());
    for (std::size_t m = 0; m < kernels.size(); ++m) {
      const double e =
          static_cast<double>(preds[i].min_error_per_mode[static_cast<Eigen::Index>(m)]);
      row.per_mode[m] =
          as_rms ? std::sqrt(e / (4.0 * static_cast<double>(kernels[m].length())))
                 : e;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline void write_trace_csv(const TraceTable& table, std::ostream& os) {
  os << "t_index";
  for (const auto& m : table.mode_order)
    os << ',' << (table.as_rms ? "rms_" : "e_") << m;
  os << ",mode,phase\n";
  for (const auto& row : table.rows) {
    os << row.t_index;
    char buf[64];
    for (double v : row.per_mode) {
      std::snprintf(buf, sizeof(buf), "%.6g", v);
      os << ',' << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.9g", row.phase);
    os << ',' << row.mode_id << ',' << buf << '\n';
  }
}

}  // namespace gaitmatch
