// gaitmatch: train kernels, predict mode/phase, evaluate, synthesize, bench.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gaitmatch/gaitmatch.hpp"

namespace fs = std::filesystem;
using namespace gaitmatch;

namespace {

struct TrainOpts {
  std::string input;
  std::string mode;
  std::string hs_channel = "rsh";
  std::string out;
  double min_sep_s = 0.5;
  double min_prom_deg = 5.0;
  double rate_hz = 230.0;
};

void run_train(const TrainOpts& o) {
  const auto stream = read_stream_file<double>(o.input);

  Eigen::VectorXd signal(static_cast<Eigen::Index>(stream.size()));
  if (o.hs_channel == "rsh") {
    for (std::size_t i = 0; i < stream.size(); ++i)
      signal[static_cast<Eigen::Index>(i)] = stream.frames[i].angles[kRightShank];
  } else {  // rft
    if (!stream.has_foot())
      throw DataError("--hs-channel rft needs theta_rft/theta_lft columns in " + o.input);
    signal = stream.foot_angles.row(0).transpose();
  }

  PeakConfig peaks;
  peaks.min_separation_s = o.min_sep_s;
  peaks.min_prominence_deg = o.min_prom_deg;
  const auto hs = detect_heel_strikes<double>(signal, o.rate_hz, peaks);
  if (hs.size() < 2)
    throw InsufficientDataError("found " + std::to_string(hs.size()) +
                                " heel strikes in " + o.input + "; need at least 2");

  const auto strides = segment_strides(stream.frames, hs);
  const auto kernel = build_kernel(o.mode, strides, o.rate_hz);
  write_kernel_file(kernel, o.out);

  if (strides.size() < 3)
    std::cerr << "warning: only " << strides.size()
              << " strides; kernel may be noisy\n";
  std::printf("mode=%s strides=%zu N=%lld resolution=%.9g\n", o.mode.c_str(),
              strides.size(), static_cast<long long>(kernel.length()),
              kernel.phase_resolution());
}

struct PredictOpts {
  std::string kernels_dir;
  std::string input;
  std::string algo = "efficient";
  std::string warm_start = "zero-history";
  std::string out;
};

KernelSet<double> load_kernel_dir(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw DataError("kernel directory '" + dir + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  if (files.empty()) throw DataError("no .csv kernel files in '" + dir + "'");
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  KernelSet<double> set;
  for (const auto& f : files) set.add(read_kernel_file<double>(f.string()));
  return set;
}

void run_predict(const PredictOpts& o) {
  const auto kernels = load_kernel_dir(o.kernels_dir);
  const auto stream = read_stream_file<double>(o.input);

  std::vector<Prediction<double>> preds;
  if (o.algo == "efficient") {
    MatcherConfig cfg;
    cfg.warm_start =
        o.warm_start == "zeros" ? WarmStart::zeros : WarmStart::zero_history;
    preds = run_efficient(kernels, stream.frames, cfg);
  } else {
    preds = run_naive(kernels, stream.frames);
  }

  auto f = std::ofstream(o.out, std::ios::binary);
  if (!f) throw FormatError("cannot open '" + o.out + "' for writing");
  write_predictions(kernels, stream.frames, preds, f);
  std::printf("wrote %zu predictions to %s (algo=%s, modes=%zu)\n", preds.size(),
              o.out.c_str(), o.algo.c_str(), kernels.size());
}

struct EvalOpts {
  std::string pred;
  std::string truth;
};

void run_eval(const EvalOpts& o) {
  const auto records = read_predictions_file(o.pred);
  const auto truth = read_stream_file<double>(o.truth);
  if (!truth.has_labels())
    throw DataError("truth stream '" + o.truth + "' has no mode/phase labels");
  if (records.size() != truth.size())
    throw DataError("prediction/truth row counts differ (" +
                    std::to_string(records.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].t_index != truth.frames[i].t_index)
      throw DataError("prediction/truth rows are misaligned at row " +
                      std::to_string(i + 2));

  std::vector<Prediction<double>> preds(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    preds[i].mode_id = records[i].mode_id;
    preds[i].phase = records[i].phase;
    preds[i].warm = records[i].warm;
  }
  const auto r = score(preds, truth);

  std::printf("samples scored: %lld (warm-up skipped: %lld)\n",
              static_cast<long long>(r.total),
              static_cast<long long>(r.skipped_warmup));
  std::printf("accuracy: %.6g (%lld/%lld)\n", r.accuracy,
              static_cast<long long>(r.correct), static_cast<long long>(r.total));

  int width = 9;
  for (const auto& m : r.mode_order)
    width = std::max(width, static_cast<int>(m.size()) + 2);
  std::printf("confusion (rows=true, cols=predicted):\n%*s", width, "");
  for (const auto& m : r.mode_order) std::printf("%*s", width, m.c_str());
  std::printf("\n");
  for (Eigen::Index i = 0; i < r.confusion.rows(); ++i) {
    std::printf("%*s", width, r.mode_order[static_cast<std::size_t>(i)].c_str());
    for (Eigen::Index j = 0; j < r.confusion.cols(); ++j)
      std::printf("%*lld", width, static_cast<long long>(r.confusion(i, j)));
    std::printf("\n");
  }

  std::printf("phase error on correctly classified samples:\n");
  for (std::size_t m = 0; m < r.mode_order.size(); ++m) {
    const auto& st = r.phase[m];
    if (st.count == 0) continue;
    std::printf("  %s: mean=%.6g sd=%.6g max=%.6g (n=%lld)\n",
                r.mode_order[m].c_str(), st.mean, st.stddev, st.max,
                static_cast<long long>(st.count));
  }
  std::printf("misclassified worst phase error: %.6g\n",
              r.misclassified_max_phase_error);
}

struct SynthOpts {
  std::string profile;
  double duration = 0.0;
  double noise = 0.0;
  double jitter = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

void run_synth(const SynthOpts& o) {
  GenConfig cfg;
  cfg.noise_sigma_deg = o.noise;
  cfg.cadence_jitter_frac = o.jitter;
  cfg.seed = o.seed;
  const auto catalog = default_profiles();

  LabeledStream<double> stream;
  if (o.profile.find(':') != std::string::npos) {
    if (o.duration != 0.0)
      throw std::invalid_argument(
          "session specs embed durations; drop --duration with 'id:sec,id:sec'");
    std::vector<std::pair<std::string, double>> schedule;
    std::size_t start = 0;
    while (start <= o.profile.size()) {
      const std::size_t comma = o.profile.find(',', start);
      const std::string part = o.profile.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      const std::size_t colon = part.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 >= part.size())
        throw std::invalid_argument("bad session segment '" + part +
                                    "'; expected id:seconds");
      schedule.emplace_back(part.substr(0, colon), std::stod(part.substr(colon + 1)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    stream = generate_session<double>(catalog, schedule, cfg);
  } else {
    if (!(o.duration > 0.0))
      throw std::invalid_argument("--duration must be positive for a single profile");
    const ModeProfile* profile = nullptr;
    for (const auto& p : catalog)
      if (p.mode_id == o.profile) profile = &p;
    if (profile == nullptr)
      throw std::invalid_argument("unknown profile '" + o.profile + "'");
    stream = generate(*profile, o.duration, cfg);
  }

  write_stream_file(stream, o.out);
  std::printf("wrote %zu frames to %s\n", stream.size(), o.out.c_str());
}

struct BenchOpts {
  long steps = 10000;
  int modes = 7;
  std::vector<long long> n_values{400};
  std::string algo = "both";
  int repeat = 1;
  std::string out;
};

void run_bench(const BenchOpts& o) {
  BenchConfig cfg;
  cfg.steps = o.steps;
  cfg.m_values = {o.modes};
  cfg.n_values.clear();
  for (long long n : o.n_values) cfg.n_values.push_back(static_cast<Eigen::Index>(n));
  cfg.repeats = o.repeat;
  cfg.run_efficient = o.algo != "naive";
  cfg.run_naive = o.algo != "efficient";

  const auto rows = run_sweep(cfg);

  std::printf("%-10s %6s %4s %12s %12s %12s %14s\n", "algo", "n", "m", "mean_us",
              "median_us", "p99_us", "cache_bytes");
  for (const auto& r : rows)
    std::printf("%-10s %6lld %4d %12.4f %12.4f %12.4f %14zu\n", r.algo.c_str(),
                static_cast<long long>(r.n), r.m, r.mean_us, r.median_us, r.p99_us,
                r.cache_bytes);
  for (const auto& r : rows) {
    if (r.algo != "efficient") continue;
    for (const auto& nv : rows)
      if (nv.algo == "naive" && nv.n == r.n && nv.m == r.m)
        std::printf("speedup at n=%lld, m=%d: %.1fx\n", static_cast<long long>(r.n),
                    r.m, nv.mean_us / r.mean_us);
  }

  if (!o.out.empty()) {
    auto f = std::ofstream(o.out, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + o.out + "' for writing");
    write_report(rows, f);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming locomotion mode and gait phase matcher"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file overriding any flag");
  app.allow_config_extras(false);

  TrainOpts train;
  auto* t = app.add_subcommand("train", "build a mode kernel from a recording");
  t->add_option("--input", train.input, "stream csv")->required();
  t->add_option("--mode", train.mode, "mode id for the kernel")
      ->required()
      ->check([](const std::string& s) {
        return s.empty() ? std::string("--mode must not be empty") : std::string();
      });
  t->add_option("--hs-channel", train.hs_channel, "heel strike signal")
      ->check(CLI::IsMember({"rft", "rsh"}));
  t->add_option("--out", train.out, "kernel csv to write")->required();
  t->add_option("--min-sep-s", train.min_sep_s, "minimum strike spacing, seconds");
  t->add_option("--min-prom-deg", train.min_prom_deg, "minimum peak prominence, degrees");
  t->add_option("--rate-hz", train.rate_hz, "stream sample rate")
      ->check(CLI::PositiveNumber);
  t->callback([&] { run_train(train); });

  PredictOpts predict;
  auto* p = app.add_subcommand("predict", "classify mode and phase per sample");
  p->add_option("--kernels", predict.kernels_dir, "directory of kernel csv files")
      ->required();
  p->add_option("--input", predict.input, "stream csv")->required();
  p->add_option("--algo", predict.algo, "matcher implementation")
      ->check(CLI::IsMember({"efficient", "naive"}));
  p->add_option("--warm-start", predict.warm_start,
                "efficient matcher initialization")
      ->check(CLI::IsMember({"zeros", "zero-history"}));
  p->add_option("--out", predict.out, "prediction csv to write")->required();
  p->callback([&] { run_predict(predict); });

  EvalOpts eval_opts;
  auto* e = app.add_subcommand("eval", "score predictions against labels");
  e->add_option("--pred", eval_opts.pred, "prediction csv")->required();
  e->add_option("--truth", eval_opts.truth, "labeled stream csv")->required();
  e->callback([&] { run_eval(eval_opts); });

  SynthOpts synth;
  auto* s = app.add_subcommand("synth", "generate a synthetic recording");
  s->add_option("--profile", synth.profile, "mode id, or session 'id:sec,id:sec'")
      ->required();
  s->add_option("--duration", synth.duration, "seconds (single-profile form)");
  s->add_option("--noise", synth.noise, "gaussian angle noise sigma, degrees");
  s->add_option("--jitter", synth.jitter, "cadence jitter fraction");
  s->add_option("--seed", synth.seed, "rng seed");
  s->add_option("--out", synth.out, "stream csv to write")->required();
  s->callback([&] { run_synth(synth); });

  BenchOpts bench;
  auto* b = app.add_subcommand("bench", "per-step latency of both matchers");
  b->add_option("--steps", bench.steps, "timed steps per configuration");
  b->add_option("--modes", bench.modes, "kernel count")->check(CLI::PositiveNumber);
  b->add_option("--n", bench.n_values, "kernel length (repeatable)");
  b->add_option("--algo", bench.algo, "which matchers to time")
      ->check(CLI::IsMember({"both", "efficient", "naive"}));
  b->add_option("--repeat", bench.repeat, "timing passes to pool");
  b->add_option("--out", bench.out, "also write the report csv here");
  b->callback([&] { run_bench(bench); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);  // --help
    std::cerr << "gaitmatch: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "gaitmatch: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
