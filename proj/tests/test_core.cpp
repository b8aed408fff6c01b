// Frame/kernel/prediction basics: phase mapping, argmin selection,
// tie-breaking, history ring.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "gaitmatch/history.hpp"
#include "gaitmatch/kernel.hpp"
#include "gaitmatch/prediction.hpp"
#include "gaitmatch/types.hpp"

using namespace gaitmatch;

namespace {

ChannelMatrix<double> random_columns(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  ChannelMatrix<double> m(kChannels, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (int r = 0; r < kChannels; ++r) m(r, c) = u(rng);
  return m;
}

}  // namespace

TEST_CASE("phase_of maps 1-based cycle positions into (0,1]") {
  CHECK(phase_of(2, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(phase_of(426, 426) == 1.0);
  CHECK(phase_of(1, 392) == doctest::Approx(1.0 / 392.0).epsilon(1e-15));

  CHECK_THROWS_AS(phase_of(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(phase_of(11, 10), std::invalid_argument);
  CHECK_THROWS_AS(phase_of(1, 0), std::invalid_argument);
}

TEST_CASE("phase_of is strictly monotone in j") {
  const Eigen::Index n = 97;
  double prev = 0.0;
  for (Eigen::Index j = 1; j <= n; ++j) {
    const double p = phase_of(j, n);
    CHECK(p > prev);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("kernel phase resolution is 1/N") {
  std::mt19937_64 rng(7);
  ModeKernel<double> fine("a", random_columns(426, rng), 230.0);
  ModeKernel<double> coarse("b", random_columns(280, rng), 230.0);
  // 426 columns resolve 0.23% of a cycle, 280 columns 0.36%.
  CHECK(fine.phase_resolution() == doctest::Approx(0.0023474).epsilon(1e-3));
  CHECK(coarse.phase_resolution() == doctest::Approx(0.0035714).epsilon(1e-3));
  CHECK(fine.phase_resolution() == 1.0 / 426.0);
}

TEST_CASE("kernel construction validates its inputs") {
  std::mt19937_64 rng(8);
  auto cols = random_columns(16, rng);
  CHECK_THROWS_AS(ModeKernel<double>("", cols, 230.0), std::invalid_argument);
  CHECK_THROWS_AS(ModeKernel<double>("a,b", cols, 230.0), std::invalid_argument);
  CHECK_THROWS_AS(ModeKernel<double>("a", cols, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModeKernel<double>("a", random_columns(1, rng), 230.0),
                  std::invalid_argument);
  auto bad = cols;
  bad(2, 5) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ModeKernel<double>("a", bad, 230.0), DataError);
}

TEST_CASE("kernel set rejects duplicate ids and keeps declaration order") {
  std::mt19937_64 rng(9);
  KernelSet<double> set;
  set.add(ModeKernel<double>("Slow", random_columns(12, rng), 230.0));
  set.add(ModeKernel<double>("Fast", random_columns(9, rng), 230.0));
  CHECK(set.size() == 2);
  CHECK(set[0].mode_id() == "Slow");
  CHECK(set[1].mode_id() == "Fast");
  CHECK(set.max_length() == 12);
  CHECK(set.index_of("Fast") == 1);
  CHECK(set.index_of("nope") == -1);
  CHECK_THROWS_AS(set.add(ModeKernel<double>("Slow", random_columns(5, rng), 230.0)),
                  std::invalid_argument);
}

TEST_CASE("select_prediction picks the global minimum cell") {
  std::mt19937_64 rng(10);
  KernelSet<double> set;
  set.add(ModeKernel<double>("m", random_columns(3, rng), 230.0));

  std::vector<ErrorVector<double>> errs(1);
  errs[0].resize(3);
  errs[0] << 5.0, 0.0, 7.0;
  auto p = select_prediction(set, errs, true);
  CHECK(p.mode_id == "m");
  CHECK(p.mode_index == 0);
  CHECK(p.j_star == 2);
  CHECK(p.phase == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.min_error_per_mode[0] == 0.0);
  CHECK(p.warm);
}

TEST_CASE("select_prediction ties go to the earlier mode, then smaller j") {
  std::mt19937_64 rng(11);
  KernelSet<double> set;
  set.add(ModeKernel<double>("first", random_columns(4, rng), 230.0));
  set.add(ModeKernel<double>("second", random_columns(4, rng), 230.0));

  std::vector<ErrorVector<double>> errs(2);
  errs[0].resize(4);
  errs[1].resize(4);
  errs[0] << 9.0, 3.0, 8.0, 3.0;  // tie inside the mode: j=2 wins over j=4
  errs[1] << 3.0, 9.0, 9.0, 9.0;  // tie across modes: "first" wins
  auto p = select_prediction(set, errs, false);
  CHECK(p.mode_id == "first");
  CHECK(p.j_star == 2);
  CHECK_FALSE(p.warm);
}

TEST_CASE("select_prediction matches an exhaustive scan on random inputs") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    KernelSet<double> set;
    const int modes = 1 + static_cast<int>(rng() % 5);
    std::vector<ErrorVector<double>> errs(modes);
    for (int m = 0; m < modes; ++m) {
      const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 20);
      set.add(ModeKernel<double>("m" + std::to_string(m), random_columns(n, rng), 230.0));
      errs[m].resize(n);
      for (Eigen::Index j = 0; j < n; ++j) errs[m][j] = u(rng);
    }

    // independent oracle: plain double loop, explicit tie rules
    int best_m = -1;
    Eigen::Index best_j = -1;
    double best = 0.0;
    for (int m = 0; m < modes; ++m)
      for (Eigen::Index j = 0; j < errs[m].size(); ++j)
        if (best_m < 0 || errs[m][j] < best) {
          best = errs[m][j];
          best_m = m;
          best_j = j + 1;
        }

    auto p = select_prediction(set, errs, true);
    CHECK(p.mode_index == best_m);
    CHECK(p.j_star == best_j);
  }
}

TEST_CASE("select_prediction is invariant under positive rescaling") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  KernelSet<double> set;
  std::vector<ErrorVector<double>> errs(3), scaled(3);
  for (int m = 0; m < 3; ++m) {
    set.add(ModeKernel<double>("m" + std::to_string(m), random_columns(11, rng), 230.0));
    errs[m].resize(11);
    for (Eigen::Index j = 0; j < 11; ++j) errs[m][j] = u(rng);
    scaled[m] = 3.75 * errs[m];
  }
  auto a = select_prediction(set, errs, true);
  auto b = select_prediction(set, scaled, true);
  CHECK(a.mode_index == b.mode_index);
  CHECK(a.j_star == b.j_star);
}

TEST_CASE("select_prediction rejects bad inputs") {
  std::mt19937_64 rng(14);
  KernelSet<double> set;
  set.add(ModeKernel<double>("m", random_columns(3, rng), 230.0));

  std::vector<ErrorVector<double>> empty;
  CHECK_THROWS_AS(select_prediction(set, empty, true), std::invalid_argument);

  std::vector<ErrorVector<double>> nan_errs(1);
  nan_errs[0].resize(3);
  nan_errs[0] << 1.0, std::numeric_limits<double>::quiet_NaN(), 2.0;
  CHECK_THROWS_AS(select_prediction(set, nan_errs, true), DataError);

  std::vector<ErrorVector<double>> short_errs(1);
  short_errs[0].resize(2);
  short_errs[0] << 1.0, 2.0;
  CHECK_THROWS_AS(select_prediction(set, short_errs, true), std::invalid_argument);
}

TEST_CASE("history buffer starts zero-filled and keeps newest at offset 0") {
  HistoryBuffer<double> h(3);
  CHECK(h.capacity() == 3);
  for (Eigen::Index t = 0; t < 3; ++t) CHECK(h.at_offset(t).norm() == 0.0);

  Vec4<double> a, b;
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  h.push(a);
  CHECK(h.at_offset(0).isApprox(a));
  CHECK(h.at_offset(1).norm() == 0.0);
  h.push(b);
  CHECK(h.at_offset(0).isApprox(b));
  CHECK(h.at_offset(1).isApprox(a));

  h.push(a);
  h.push(b);  // wraps; the very first frame has been evicted
  CHECK(h.at_offset(0).isApprox(b));
  CHECK(h.at_offset(1).isApprox(a));
  CHECK(h.at_offset(2).isApprox(b));
  CHECK(h.pushed() == 4);

  CHECK_THROWS_AS(h.at_offset(3), std::invalid_argument);
  CHECK_THROWS_AS(h.at_offset(-1), std::invalid_argument);
  CHECK_THROWS_AS(HistoryBuffer<double>(0), std::invalid_argument);

  h.clear();
  CHECK(h.pushed() == 0);
  CHECK(h.at_offset(0).norm() == 0.0);
}

TEST_CASE("core types compile and run in float") {
  std::mt19937_64 rng(15);
  ChannelMatrix<float> cols(kChannels, 5);
  for (Eigen::Index c = 0; c < 5; ++c)
    for (int r = 0; r < kChannels; ++r)
      cols(r, c) = static_cast<float>(rng() % 100) / 10.0f;
  ModeKernel<float> k("f", cols, 100.0);
  KernelSet<float> set;
  set.add(k);
  std::vector<ErrorVector<float>> errs(1);
  errs[0].resize(5);
  errs[0] << 4.f, 2.f, 8.f, 1.f, 9.f;
  auto p = select_prediction(set, errs, true);
  CHECK(p.j_star == 4);
}
