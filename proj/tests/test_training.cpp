#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gaitmatch/synthgait.hpp"
#include "gaitmatch/training.hpp"

using namespace gaitmatch;
using VecXd = Eigen::VectorXd;

namespace {

std::vector<SampleFrame<double>> ramp_frames(std::size_t count) {
  std::vector<SampleFrame<double>> frames(count);
  for (std::size_t i = 0; i < count; ++i) {
    frames[i].t_index = static_cast<std::int64_t>(i);
    for (int c = 0; c < kChannels; ++c)
      frames[i].angles[c] = static_cast<double>(i) + 100.0 * c;
  }
  return frames;
}

ChannelMatrix<double> constant_stride(Eigen::Index len, double value) {
  return ChannelMatrix<double>::Constant(kChannels, len, value);
}

ChannelMatrix<double> random_stride(Eigen::Index len, std::uint64_t seed,
                                    bool integral = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-40.0, 40.0);
  ChannelMatrix<double> s(kChannels, len);
  for (Eigen::Index j = 0; j < len; ++j)
    for (int c = 0; c < kChannels; ++c)
      s(c, j) = integral ? std::floor(angle(rng)) : angle(rng);
  return s;
}

}  // namespace

TEST_CASE("cosine train yields one peak per cycle at exact multiples of the period") {
  const Eigen::Index period = 345;  // 1.5 s at 230 Hz
  const Eigen::Index n = 2300;      // 10 s
  VecXd sig(n);
  for (Eigen::Index t = 0; t < n; ++t)
    sig[t] = 20.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) /
                             static_cast<double>(period));

  const auto peaks = detect_heel_strikes<double>(sig, 230.0);
  REQUIRE(peaks.size() == 6);  // t=0 is an edge, not an interior maximum
  for (std::size_t k = 0; k < peaks.size(); ++k)
    CHECK(peaks[k] == static_cast<Eigen::Index>((k + 1) * 345));
}

TEST_CASE("constant signal has no peaks") {
  const VecXd sig = VecXd::Constant(500, 3.0);
  CHECK(detect_heel_strikes<double>(sig, 230.0).empty());
}

TEST_CASE("peak detection input validation") {
  const VecXd ok = VecXd::Zero(500);
  CHECK_THROWS_AS(detect_heel_strikes<double>(VecXd::Zero(100), 230.0),
                  std::invalid_argument);  // shorter than 2x separation
  CHECK_THROWS_AS(detect_heel_strikes<double>(ok, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(detect_heel_strikes<double>(ok, -5.0), std::invalid_argument);
  PeakConfig bad;
  bad.min_separation_s = 0.0;
  CHECK_THROWS_AS(detect_heel_strikes<double>(ok, 230.0, bad), std::invalid_argument);
  bad = PeakConfig{};
  bad.min_prominence_deg = -1.0;
  CHECK_THROWS_AS(detect_heel_strikes<double>(ok, 230.0, bad), std::invalid_argument);
  VecXd nan_sig = ok;
  nan_sig[250] = std::nan("");
  CHECK_THROWS_AS(detect_heel_strikes<double>(nan_sig, 230.0), DataError);
}

TEST_CASE("plateau peak reports midpoint index") {
  VecXd sig = VecXd::Constant(240, -1.0);
  sig[9] = 1.0;
  sig[10] = 5.0;
  sig[11] = 5.0;
  sig[12] = 5.0;
  sig[13] = 1.0;
  const auto peaks = detect_heel_strikes<double>(sig, 230.0);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0] == 11);
}

TEST_CASE("taller peak wins inside the separation window") {
  VecXd sig = VecXd::Zero(400);
  sig[49] = 5.0;
  sig[50] = 10.0;
  sig[51] = 5.0;
  sig[119] = 6.0;
  sig[120] = 12.0;  // 70 samples from the first peak, closer than 115
  sig[121] = 6.0;
  sig[349] = 4.0;
  sig[350] = 8.0;
  sig[351] = 4.0;
  const auto peaks = detect_heel_strikes<double>(sig, 230.0);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0] == 120);
  CHECK(peaks[1] == 350);
}

TEST_CASE("low-prominence wiggles are rejected") {
  VecXd sig = VecXd::Zero(400);
  sig[100] = 4.9;   // below the 5 degree default
  sig[300] = 5.0;   // exactly at threshold counts
  const auto peaks = detect_heel_strikes<double>(sig, 230.0);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0] == 300);
}

TEST_CASE("label-derived heel strikes mark phase restarts") {
  LabeledStream<double> s;
  s.frames.resize(6);
  s.mode_labels.assign(6, "walk");
  SUBCASE("mid-cycle start is not a strike") {
    s.phase_labels = {0.5, 0.75, 1.0, 0.25, 0.5, 0.75};
    const auto hs = heel_strikes_from_labels(s);
    REQUIRE(hs.size() == 1);
    CHECK(hs[0] == 3);
  }
  SUBCASE("start near the cycle origin counts") {
    s.phase_labels = {0.25, 0.5, 0.75, 1.0, 0.25, 0.5};
    const auto hs = heel_strikes_from_labels(s);
    REQUIRE(hs.size() == 2);
    CHECK(hs[0] == 0);
    CHECK(hs[1] == 4);
  }
  SUBCASE("unlabeled stream throws") {
    s.mode_labels.clear();
    s.phase_labels.clear();
    CHECK_THROWS_AS(heel_strikes_from_labels(s), std::invalid_argument);
  }
}

TEST_CASE("segmentation slices strike-to-strike blocks") {
  const auto frames = ramp_frames(250);
  const auto segs = segment_strides(frames, {0, 100, 200});
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].cols() == 100);
  CHECK(segs[1].cols() == 100);
  CHECK(segs[0].col(0) == frames[0].angles);
  CHECK(segs[0].col(99) == frames[99].angles);
  CHECK(segs[1].col(0) == frames[100].angles);
  CHECK(segs[1].col(99) == frames[199].angles);
}

TEST_CASE("segmentation drops sub-4-sample artifacts") {
  const auto frames = ramp_frames(250);
  const auto segs = segment_strides(frames, {0, 2, 102});
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].cols() == 100);
  CHECK(segs[0].col(0) == frames[2].angles);
}

TEST_CASE("segmentation error conditions") {
  const auto frames = ramp_frames(250);
  CHECK_THROWS_AS(segment_strides(frames, {0, 3}), InsufficientDataError);
  CHECK_THROWS_AS(segment_strides(frames, {5}), InsufficientDataError);
  CHECK_THROWS_AS(segment_strides(frames, {}), InsufficientDataError);
  CHECK_THROWS_AS(segment_strides(frames, {10, 5}), std::invalid_argument);
  CHECK_THROWS_AS(segment_strides(frames, {10, 10}), std::invalid_argument);
  CHECK_THROWS_AS(segment_strides(frames, {0, 300}), std::invalid_argument);
  CHECK_THROWS_AS(segment_strides(frames, {-1, 100}), std::invalid_argument);
}

TEST_CASE("resampling a linear ramp lands on exact grid values") {
  ChannelMatrix<double> stride(kChannels, 11);
  for (Eigen::Index t = 0; t < 11; ++t)
    for (int c = 0; c < kChannels; ++c)
      stride(c, t) = 100.0 * c + static_cast<double>(t);

  SUBCASE("downsample to 6 hits even samples") {
    const auto out = resample_stride(stride, 6);
    REQUIRE(out.cols() == 6);
    const double want[] = {0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
    for (Eigen::Index k = 0; k < 6; ++k)
      for (int c = 0; c < kChannels; ++c)
        CHECK(out(c, k) == 100.0 * c + want[k]);
  }
  SUBCASE("upsample to 21 hits half-steps exactly") {
    const auto out = resample_stride(stride, 21);
    for (Eigen::Index k = 0; k < 21; ++k)
      CHECK(out(0, k) == 0.5 * static_cast<double>(k));
  }
  SUBCASE("same length is the identity") {
    const auto out = resample_stride(stride, 11);
    CHECK(out == stride);
  }
  SUBCASE("endpoints are copied exactly for awkward ratios") {
    const auto out = resample_stride(stride, 7);
    CHECK(out.col(0) == stride.col(0));
    CHECK(out.col(6) == stride.col(10));
  }
  SUBCASE("degenerate sizes throw") {
    CHECK_THROWS_AS(resample_stride(stride, 1), std::invalid_argument);
    CHECK_THROWS_AS(resample_stride(constant_stride(1, 0.0), 5), std::invalid_argument);
  }
}

TEST_CASE("down-up round trip of a smooth stride stays within half a degree") {
  ChannelMatrix<double> stride(kChannels, 50);
  for (Eigen::Index t = 0; t < 50; ++t)
    for (int c = 0; c < kChannels; ++c)
      stride(c, t) = 20.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 50.0 +
                                     0.3 * c);
  const auto down = resample_stride(stride, 25);
  const auto back = resample_stride(down, 50);
  CHECK((back - stride).cwiseAbs().maxCoeff() < 0.5);
}

TEST_CASE("kernel length is the rounded mean stride length") {
  std::vector<ChannelMatrix<double>> strides;
  strides.push_back(random_stride(390, 1));
  strides.push_back(random_stride(392, 2));
  strides.push_back(random_stride(394, 3));
  const auto kernel = build_kernel("Slow", strides, 230.0);
  CHECK(kernel.length() == 392);
  CHECK(kernel.mode_id() == "Slow");
  CHECK(kernel.sample_rate_hz() == 230.0);
}

TEST_CASE("averaging two constant strides of unequal length") {
  std::vector<ChannelMatrix<double>> strides;
  strides.push_back(constant_stride(10, 1.0));
  strides.push_back(constant_stride(12, 3.0));
  const auto kernel = build_kernel("c", strides, 230.0);
  REQUIRE(kernel.length() == 11);
  CHECK((kernel.columns().array() == 2.0).all());
}

TEST_CASE("stride order does not change the kernel") {
  std::vector<ChannelMatrix<double>> strides;
  for (std::uint64_t s = 0; s < 5; ++s)
    strides.push_back(random_stride(80 + 3 * static_cast<Eigen::Index>(s), 100 + s));
  const auto a = build_kernel("m", strides, 230.0);
  std::vector<ChannelMatrix<double>> shuffled = {strides[3], strides[0], strides[4],
                                                 strides[1], strides[2]};
  const auto b = build_kernel("m", shuffled, 230.0);
  REQUIRE(a.length() == b.length());
  CHECK((a.columns() - b.columns()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("duplicating the stride list is a no-op") {
  SUBCASE("single stride, exact") {
    std::vector<ChannelMatrix<double>> one = {random_stride(90, 7)};
    std::vector<ChannelMatrix<double>> two = {one[0], one[0]};
    const auto a = build_kernel("m", one, 230.0);
    const auto b = build_kernel("m", two, 230.0);
    CHECK(a.columns() == b.columns());
  }
  SUBCASE("pair doubled, exact on integral same-length strides") {
    std::vector<ChannelMatrix<double>> pair = {random_stride(93, 8, true),
                                               random_stride(93, 9, true)};
    std::vector<ChannelMatrix<double>> twice = {pair[0], pair[1], pair[0], pair[1]};
    const auto a = build_kernel("m", pair, 230.0);
    const auto b = build_kernel("m", twice, 230.0);
    REQUIRE(a.length() == 93);
    CHECK(a.columns() == b.columns());
  }
  SUBCASE("pair of unequal lengths doubled, tight tolerance") {
    std::vector<ChannelMatrix<double>> pair = {random_stride(90, 8),
                                               random_stride(96, 9)};
    std::vector<ChannelMatrix<double>> twice = {pair[0], pair[1], pair[0], pair[1]};
    const auto a = build_kernel("m", pair, 230.0);
    const auto b = build_kernel("m", twice, 230.0);
    REQUIRE(a.length() == 93);
    CHECK((a.columns() - b.columns()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("kernel building error conditions") {
  CHECK_THROWS_AS(build_kernel<double>("m", {}, 230.0), InsufficientDataError);
  std::vector<ChannelMatrix<double>> tiny = {constant_stride(1, 0.0)};
  CHECK_THROWS_AS(build_kernel("m", tiny, 230.0), InsufficientDataError);
  std::vector<ChannelMatrix<double>> ok = {constant_stride(10, 0.0)};
  CHECK_THROWS_AS(build_kernel("", ok, 230.0), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel("m", ok, 0.0), std::invalid_argument);
}

TEST_CASE("full training pass over a clean synthetic recording") {
  const auto profiles = default_profiles();
  const auto& slow = profiles[0];
  REQUIRE(slow.mode_id == "Slow");

  GenConfig cfg;
  const auto stream = generate(slow, 10.0 * slow.period_s, cfg);  // 10 strides
  REQUIRE(stream.size() == 3920);

  SUBCASE("peak picking on the right shank finds every stride boundary") {
    VecXd shank(static_cast<Eigen::Index>(stream.size()));
    for (std::size_t i = 0; i < stream.size(); ++i)
      shank[static_cast<Eigen::Index>(i)] = stream.frames[i].angles[kRightShank];
    const auto hs = detect_heel_strikes<double>(shank, cfg.sample_rate_hz);
    REQUIRE(hs.size() == 9);
    for (std::size_t k = 0; k < hs.size(); ++k)
      CHECK(hs[k] == static_cast<Eigen::Index>(392 * (k + 1)));
  }

  SUBCASE("label segmentation and averaging reproduce the generating wave") {
    const auto hs = heel_strikes_from_labels(stream);
    REQUIRE(hs.size() == 10);
    CHECK(hs[0] == 0);
    const auto strides = segment_strides(stream.frames, hs);
    REQUIRE(strides.size() == 9);
    const auto kernel = build_kernel("Slow", strides, cfg.sample_rate_hz);
    REQUIRE(kernel.length() == 392);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < 392; ++j) {
      const double phase = static_cast<double>(j) / 392.0;
      for (int c = 0; c < kChannels; ++c)
        worst = std::max(worst,
                         std::abs(kernel.columns()(c, j) -
                                  slow.channels[static_cast<std::size_t>(c)].at(phase)));
    }
    CHECK(worst <= 1e-12);
  }
}
