// Micro-benchmark harness for the two matchers: scaling sweeps over kernel
// length and mode count, per-step latency stats, cache-footprint reporting.
// Timed runs drive the ordinary step() entry points — there is no
// benchmark-only fast path.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaitmatch/kernel.hpp"
#include "gaitmatch/matcher_incremental.hpp"
#include "gaitmatch/matcher_naive.hpp"
#include "gaitmatch/types.hpp"

namespace gaitmatch {

struct BenchConfig {
  std::vector<Eigen::Index> n_values{100, 200, 400};
  std::vector<int> m_values{7};
  long steps = 10000;        // timed steps per configuration
  long warmup_steps = 1000;  // untimed steps before the clock starts
  std::uint64_t seed = 42;
  bool run_efficient = true;
  bool run_naive = true;
  int repeats = 1;  // per-step samples are pooled across repeats
};

struct BenchRow {
  std::string algo;
  Eigen::Index n = 0;
  int m = 0;
  long steps = 0;
  int repeats = 1;
  double mean_us = 0.0;
  double median_us = 0.0;
  double p99_us = 0.0;
  std::size_t cache_bytes = 0;  // square-term cache; 0 for the naive matcher
  std::uint64_t checksum = 0;   // folds every prediction, keeps work observable
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_line: need at least 2 points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r2 = 1.0;  // y constant and perfectly reproduced by slope 0
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += e * e;
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

namespace bench_detail {

inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline KernelSet<double> make_kernels(std::uint64_t seed, int m, Eigen::Index n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-45.0, 45.0);
  KernelSet<double> set;
  for (int i = 0; i < m; ++i) {
    ChannelMatrix<double> cols(kChannels, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (int c = 0; c < kChannels; ++c) cols(c, j) = angle(rng);
    set.add(ModeKernel<double>("m" + std::to_string(i), std::move(cols), 230.0));
  }
  return set;
}

inline std::vector<SampleFrame<double>> make_frames(std::uint64_t seed, long count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-45.0, 45.0);
  std::vector<SampleFrame<double>> frames(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    frames[static_cast<std::size_t>(i)].t_index = i;
    for (int c = 0; c < kChannels; ++c)
      frames[static_cast<std::size_t>(i)].angles[c] = angle(rng);
  }
  return frames;
}

template <typename Matcher>
void time_one_pass(Matcher& matcher, const std::vector<SampleFrame<double>>& frames,
                   long warmup, std::vector<double>& samples_us, std::uint64_t& checksum) {
  using clock = std::chrono::steady_clock;
  long i = 0;
  for (; i < warmup; ++i) matcher.step(frames[static_cast<std::size_t>(i)]);
  for (; i < static_cast<long>(frames.size()); ++i) {
    const auto t0 = clock::now();
    const auto pred = matcher.step(frames[static_cast<std::size_t>(i)]);
    const auto t1 = clock::now();
    samples_us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
    checksum = mix(checksum ^ (static_cast<std::uint64_t>(pred.mode_index) * 1315423911ull +
                               static_cast<std::uint64_t>(pred.j_star)));
  }
}

inline void finish_row(BenchRow& row, std::vector<double>& samples_us) {
  std::sort(samples_us.begin(), samples_us.end());
  const std::size_t k = samples_us.size();
  row.mean_us = std::accumulate(samples_us.begin(), samples_us.end(), 0.0) /
                static_cast<double>(k);
  row.median_us = (k % 2) ? samples_us[k / 2]
                          : 0.5 * (samples_us[k / 2 - 1] + samples_us[k / 2]);
  row.p99_us = samples_us[std::min(k - 1, (k * 99) / 100)];
}

}  // namespace bench_detail

inline std::vector<BenchRow> run_sweep(const BenchConfig& cfg) {
  if (cfg.steps < 1000) throw std::invalid_argument("run_sweep: steps must be >= 1000");
  if (cfg.warmup_steps < 0) throw std::invalid_argument("run_sweep: negative warmup");
  if (cfg.repeats < 1) throw std::invalid_argument("run_sweep: repeats must be >= 1");
  if (cfg.n_values.empty() || cfg.m_values.empty())
    throw std::invalid_argument("run_sweep: empty sweep axis");
  if (!cfg.run_efficient && !cfg.run_naive)
    throw std::invalid_argument("run_sweep: no algorithm selected");

  std::vector<BenchRow> rows;
  for (const Eigen::Index n : cfg.n_values) {
    if (n < 2) throw std::invalid_argument("run_sweep: kernel length must be >= 2");
    for (const int m : cfg.m_values) {
      if (m < 1) throw std::invalid_argument("run_sweep: mode count must be >= 1");
      const std::uint64_t case_seed =
          bench_detail::mix(cfg.seed ^ bench_detail::mix(static_cast<std::uint64_t>(n) * 131 +
                                                         static_cast<std::uint64_t>(m)));
      const auto kernels = bench_detail::make_kernels(case_seed, m, n);
      const auto frames =
          bench_detail::make_frames(bench_detail::mix(case_seed), cfg.warmup_steps + cfg.steps);

      if (cfg.run_efficient) {
        BenchRow row{"efficient", n, m, cfg.steps, cfg.repeats};
        std::vector<double> samples;
        samples.reserve(static_cast<std::size_t>(cfg.steps) * static_cast<std::size_t>(cfg.repeats));
        IncrementalMatcher<double> matcher(kernels);
        row.cache_bytes = matcher.cache_bytes();
        for (int r = 0; r < cfg.repeats; ++r) {
          matcher.reset();
          bench_detail::time_one_pass(matcher, frames, cfg.warmup_steps, samples, row.checksum);
        }
        bench_detail::finish_row(row, samples);
        rows.push_back(std::move(row));
      }
      if (cfg.run_naive) {
        BenchRow row{"naive", n, m, cfg.steps, cfg.repeats};
        std::vector<double> samples;
        samples.reserve(static_cast<std::size_t>(cfg.steps) * static_cast<std::size_t>(cfg.repeats));
        NaiveMatcher<double> matcher(kernels);
        for (int r = 0; r < cfg.repeats; ++r) {
          matcher.reset();
          bench_detail::time_one_pass(matcher, frames, cfg.warmup_steps, samples, row.checksum);
        }
        bench_detail::finish_row(row, samples);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

inline void write_report(const std::vector<BenchRow>& rows, std::ostream& os) {
  std::string out = "algo,n,m,steps,repeats,mean_us,median_us,p99_us,cache_bytes\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%lld,%d,%ld,%d,%.4f,%.4f,%.4f,%zu\n", r.algo.c_str(),
                  static_cast<long long>(r.n), r.m, r.steps, r.repeats, r.mean_us, r.median_us,
                  r.p99_us, r.cache_bytes);
    out += buf;
  }
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace gaitmatch
