// Synthetic gait streams: per-mode harmonic trajectories sampled stride by
// stride, with optional amplitude noise and stride-to-stride cadence jitter.
// Output is fully determined by (profile, duration, config): the generator
// rolls its own uniform/gaussian draws on top of mt19937_64 so the byte
// stream does not depend on the standard library's distribution internals.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaitmatch/types.hpp"

namespace gaitmatch {

struct Harmonic {
  double amp_deg = 0.0;
  int multiple = 1;       // cycles per stride
  double phase_rad = 0.0;
};

struct ChannelWave {
  double offset_deg = 0.0;
  std::array<Harmonic, 3> harmonics{};

  double at(double phase01) const {
    double v = offset_deg;
    for (const auto& h : harmonics)
      v += h.amp_deg *
           std::sin(2.0 * std::numbers::pi * h.multiple * phase01 + h.phase_rad);
    return v;
  }
};

// One locomotion mode: stride period plus a wave per channel, in the frame
// channel order (right thigh, left thigh, right shank, left shank).
struct ModeProfile {
  std::string mode_id;
  double period_s = 1.0;
  std::array<ChannelWave, kChannels> channels{};
};

struct GenConfig {
  double sample_rate_hz = 230.0;
  double noise_sigma_deg = 0.0;
  double cadence_jitter_frac = 0.0;  // each stride period scaled by 1+U(-j,+j)
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// mt19937_64 is bit-stable everywhere; the distributions here are ours so
// the generated values are too.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {  // Box-Muller, one spare kept
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline void validate(const ModeProfile& profile, double duration_s,
                     const GenConfig& cfg) {
  if (profile.mode_id.empty())
    throw std::invalid_argument("generate: profile has empty mode id");
  if (!(profile.period_s > 0.0))
    throw std::invalid_argument("generate: period must be positive");
  if (!(duration_s > 0.0))
    throw std::invalid_argument("generate: duration must be positive");
  if (!(cfg.sample_rate_hz > 0.0))
    throw std::invalid_argument("generate: sample rate must be positive");
  if (!(cfg.noise_sigma_deg >= 0.0))
    throw std::invalid_argument("generate: noise sigma must be >= 0");
  if (cfg.cadence_jitter_frac < 0.0 || cfg.cadence_jitter_frac > 0.2)
    throw std::invalid_argument("generate: cadence jitter must be in [0, 0.2]");
}

}  // namespace detail

// Stride grid is integral: each stride occupies a whole number of samples
// (the jittered period rounded to the grid), phase labels are exact
// rationals (k+1)/L in (0, 1], and sample k of a stride sits at phase k/L.
// A noiseless, jitter-free stream is therefore exactly periodic.
template <typename Scalar = double>
LabeledStream<Scalar> generate(const ModeProfile& profile, double duration_s,
                               const GenConfig& cfg) {
  detail::validate(profile, duration_s, cfg);

  const std::int64_t frames = std::llround(duration_s * cfg.sample_rate_hz);
  const double nominal = profile.period_s * cfg.sample_rate_hz;
  detail::Draw jitter(detail::mix_seed(cfg.seed, 1));
  detail::Draw noise(detail::mix_seed(cfg.seed, 2));
  const double j = cfg.cadence_jitter_frac;

  auto next_len = [&]() {
    const double scaled = nominal * (1.0 + jitter.uniform(-j, j));
    return std::max<std::int64_t>(2, std::llround(scaled));
  };

  LabeledStream<Scalar> out;
  out.frames.resize(static_cast<std::size_t>(frames));
  out.mode_labels.assign(static_cast<std::size_t>(frames), profile.mode_id);
  out.phase_labels.resize(static_cast<std::size_t>(frames));

  std::int64_t stride_start = 0;
  std::int64_t stride_len = next_len();
  for (std::int64_t k = 0; k < frames; ++k) {
    if (k - stride_start == stride_len) {
      stride_start += stride_len;
      stride_len = next_len();
    }
    const std::int64_t local = k - stride_start;
    const double phase = static_cast<double>(local) / static_cast<double>(stride_len);

    auto& f = out.frames[static_cast<std::size_t>(k)];
    f.t_index = k;
    for (int c = 0; c < kChannels; ++c) {
      double v = profile.channels[static_cast<std::size_t>(c)].at(phase);
      if (cfg.noise_sigma_deg > 0.0) v += cfg.noise_sigma_deg * noise.gaussian();
      f.angles[c] = static_cast<Scalar>(v);
    }
    out.phase_labels[static_cast<std::size_t>(k)] =
        static_cast<double>(local + 1) / static_cast<double>(stride_len);
  }
  return out;
}

// Back-to-back single-mode segments with a continuous t_index. Segment i
// draws from seed+i, so a one-entry schedule reproduces generate() exactly.
template <typename Scalar = double>
LabeledStream<Scalar> generate_session(
    const std::vector<ModeProfile>& catalog,
    const std::vector<std::pair<std::string, double>>& schedule,
    const GenConfig& cfg) {
  if (schedule.empty())
    throw std::invalid_argument("generate_session: empty schedule");

  LabeledStream<Scalar> out;
  std::int64_t t_base = 0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const ModeProfile* profile = nullptr;
    for (const auto& p : catalog)
      if (p.mode_id == schedule[i].first) {
        profile = &p;
        break;
      }
    if (profile == nullptr)
      throw std::invalid_argument("generate_session: unknown mode '" +
                                  schedule[i].first + "'");
    GenConfig part_cfg = cfg;
    part_cfg.seed = cfg.seed + i;
    auto part = generate<Scalar>(*profile, schedule[i].second, part_cfg);
    for (auto& f : part.frames) f.t_index += t_base;
    t_base += static_cast<std::int64_t>(part.frames.size());

    out.frames.insert(out.frames.end(), part.frames.begin(), part.frames.end());
    out.mode_labels.insert(out.mode_labels.end(), part.mode_labels.begin(),
                           part.mode_labels.end());
    out.phase_labels.insert(out.phase_labels.end(), part.phase_labels.begin(),
                            part.phase_labels.end());
  }
  return out;
}

// Seven stock modes. Periods are whole sample counts at 230 Hz (392, 313,
// 280, 283, 286, 318, 309 samples). Both shank waves are cosine stacks
// peaking exactly at the stride origin, which is what makes heel strikes
// recoverable by peak picking; left-side channels are the right-side waves
// shifted by half a cycle. The three level-ground speeds are deliberately
// similar in shape so classifiers must tell near neighbors apart.
inline std::vector<ModeProfile> default_profiles() {
  constexpr double kRate = 230.0;
  constexpr double kHalf = std::numbers::pi;  // phase shift of a half cycle
  constexpr double kQuarter = std::numbers::pi / 2.0;

  struct ThighSpec {
    double a1, a2, a3, p1, p2, p3, offset;
  };
  struct ShankSpec {
    double a1, a2, a3, offset;
  };
  struct Spec {
    const char* id;
    double period_samples;
    ThighSpec thigh;
    ShankSpec shank;
  };
  const Spec specs[] = {
      {"Slow", 392, {16.0, 5.0, 1.5, 1.90, -0.80, 0.70, 8.0}, {10.0, 4.0, 2.0, -4.0}},
      {"Med", 313, {17.5, 5.5, 1.7, 1.90, -0.80, 0.70, 9.0}, {11.5, 4.3, 2.1, -4.5}},
      {"Fast", 280, {19.0, 6.0, 1.9, 1.90, -0.80, 0.70, 10.0}, {13.0, 4.6, 2.2, -5.0}},
      {"RA", 283, {22.0, 7.5, 2.5, 2.20, -0.50, 0.90, 16.0}, {12.0, 5.5, 2.5, 2.0}},
      {"RD", 286, {14.0, 4.5, 1.2, 1.60, -1.10, 0.40, 2.0}, {9.0, 3.5, 1.8, -10.0}},
      {"SA", 318, {30.0, 9.0, 3.0, 2.50, -0.30, 1.10, 20.0}, {15.0, 6.0, 3.0, 6.0}},
      {"SD", 309, {12.0, 6.5, 2.0, 1.30, -1.40, 0.20, 0.0}, {14.0, 5.0, 2.4, -12.0}},
  };

  std::vector<ModeProfile> out;
  for (const auto& s : specs) {
    ModeProfile p;
    p.mode_id = s.id;
    p.period_s = s.period_samples / kRate;

    const ChannelWave right_thigh{
        s.thigh.offset,
        {Harmonic{s.thigh.a1, 1, s.thigh.p1}, Harmonic{s.thigh.a2, 2, s.thigh.p2},
         Harmonic{s.thigh.a3, 3, s.thigh.p3}}};
    // all-cosine stack: global maximum exactly at phase 0
    const ChannelWave right_shank{
        s.shank.offset,
        {Harmonic{s.shank.a1, 1, kQuarter}, Harmonic{s.shank.a2, 2, kQuarter},
         Harmonic{s.shank.a3, 3, kQuarter}}};
    auto contralateral = [&](const ChannelWave& w) {
      ChannelWave l = w;
      for (auto& h : l.harmonics) h.phase_rad += h.multiple * kHalf;
      return l;
    };

    p.channels[kRightThigh] = right_thigh;
    p.channels[kLeftThigh] = contralateral(right_thigh);
    p.channels[kRightShank] = right_shank;
    p.channels[kLeftShank] = contralateral(right_shank);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace gaitmatch
