#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaze/bench.hpp"
#include "gaze/dataset.hpp"
#include "gaze/decide.hpp"
#include "gaze/error.hpp"
#include "gaze/eval.hpp"
#include "gaze/model_io.hpp"
#include "gaze/parallel.hpp"
#include "gaze/pipeline.hpp"
#include "gaze/report_io.hpp"
#include "gaze/synthgen.hpp"

namespace fs = std::filesystem;

namespace {

gaze::RegionScheme parse_scheme(const std::string& name) {
  if (name == "six") return gaze::RegionScheme::six();
  if (name == "two") return gaze::RegionScheme::two();
  throw gaze::Error("unknown scheme '" + name + "' (expected six|two)");
}

void parse_pose(const std::string& text, gaze::PoseDeg& pose) {
  double yaw = 0.0, pitch = 0.0;
  if (std::sscanf(text.c_str(), "%lf,%lf", &yaw, &pitch) != 2) {
    throw gaze::Error("bad pose '" + text + "' (expected yaw,pitch)");
  }
  pose = gaze::PoseDeg{yaw, pitch};
}

struct EvalFlags {
  int trees = 1000;
  int depth = 30;
  int features_per_split = 0;
  int min_samples_split = 2;
  bool no_bootstrap = false;
  int window = gaze::kCalibrationWindowFrames;
  int rfe_trees = 50;
  int rfe_depth = 30;
  std::size_t rfe_cap = 300;
  std::size_t train_cap = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--trees", trees, "forest size")->capture_default_str();
    cmd->add_option("--depth", depth, "max tree depth")->capture_default_str();
    cmd->add_option("--features-per-split", features_per_split,
                    "candidate features per split (0 = ceil(sqrt(d)))")
        ->capture_default_str();
    cmd->add_option("--min-samples-split", min_samples_split,
                    "minimum node size to split")
        ->capture_default_str();
    cmd->add_flag("--no-bootstrap", no_bootstrap,
                  "train each tree on the full sample instead of a bootstrap");
    cmd->add_option("--window", window, "calibration window in frames")
        ->capture_default_str();
    cmd->add_option("--rfe-trees", rfe_trees, "forest size per RFE round")
        ->capture_default_str();
    cmd->add_option("--rfe-depth", rfe_depth, "tree depth in RFE rounds")
        ->capture_default_str();
    cmd->add_option("--rfe-cap", rfe_cap,
                    "frames per class fed to RFE (0 = all)")
        ->capture_default_str();
    cmd->add_option("--train-cap", train_cap,
                    "training frames per class per subject (0 = all)")
        ->capture_default_str();
  }

  gaze::EvalParams to_params() const {
    gaze::EvalParams params;
    params.forest.n_trees = trees;
    params.forest.max_depth = depth;
    params.forest.features_per_split = features_per_split;
    params.forest.min_samples_split = min_samples_split;
    params.forest.bootstrap = !no_bootstrap;
    params.context_window = window;
    params.rfe_forest_size = rfe_trees;
    params.rfe_max_depth = rfe_depth;
    params.rfe_sample_cap_per_class = rfe_cap;
    params.train_cap_per_class_per_subject = train_cap;
    return params;
  }
};

std::vector<double> parse_threshold_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(',', pos);
    const std::string token =
        text.substr(pos, next == std::string::npos ? text.size() - pos
                                                   : next - pos);
    if (!token.empty()) {
      try {
        values.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw gaze::Error("bad threshold '" + token + "'");
      }
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (values.empty()) throw gaze::Error("no thresholds given");
  return values;
}

int run_gen(const gaze::GenConfig& config, const std::string& out) {
  const gaze::Dataset dataset = gaze::generate(config);
  gaze::save_frames(dataset, out);
  std::cout << "wrote " << dataset.total_frames() << " frames for "
            << dataset.subjects.size() << " subjects to " << out << "\n";
  return 0;
}

int run_train(const std::string& frames_path, const std::string& out,
              const gaze::RegionScheme& scheme, const EvalFlags& flags,
              std::uint64_t seed) {
  const gaze::Dataset dataset = gaze::load_frames(frames_path);
  const gaze::Model model =
      gaze::train_model(dataset, scheme, flags.to_params(), seed);
  gaze::save_model(model, out);
  std::cout << "trained " << model.forest.trees.size() << " trees on "
            << dataset.total_frames() << " frames ("
            << model.plan.triangulation.triangles.size()
            << " plan triangles, feature length " << model.plan.feature_len()
            << "); model written to " << out << "\n";
  return 0;
}

int run_predict(const std::string& model_path, const std::string& frames_path,
                double threshold, const std::string& out) {
  const gaze::Model model = gaze::load_model(model_path);
  const gaze::Dataset dataset = gaze::load_frames(frames_path);

  std::ofstream log(out, std::ios::binary);
  if (!log) throw gaze::Error("cannot write log: " + out);
  log << "subject,frame,true,predicted,confidence,decided\n";

  std::vector<gaze::NormalizationContext> local;
  std::vector<double> features(model.plan.feature_len());
  std::size_t decided_count = 0, total = 0;
  for (const auto& subject : dataset.subjects) {
    const gaze::NormalizationContext* ctx =
        model.find_context(subject.subject_id);
    if (ctx == nullptr) {
      local.push_back(
          gaze::compute_context(subject.frames, model.context_window));
      ctx = &local.back();
    }
    for (const auto& frame : subject.frames) {
      const gaze::Shape normalized = gaze::normalize_frame(frame, *ctx);
      gaze::extract(normalized, model.plan, features.data());
      const gaze::ProbVector probs = model.forest.predict_proba(features);
      const double conf = gaze::confidence(probs);
      const int predicted = gaze::argmax_class(probs);
      const bool decided = conf >= threshold;
      decided_count += decided ? 1 : 0;
      total += 1;
      log << subject.subject_id << ',' << frame.frame_index << ',';
      if (frame.label) {
        log << model.scheme.class_of(*frame.label);
      } else {
        log << '-';
      }
      log << ',' << predicted << ',' << gaze::format_double(conf) << ','
          << (decided ? 1 : 0) << '\n';
    }
  }
  if (!log) throw gaze::Error("write failed: " + out);
  std::cout << "predicted " << total << " frames, " << decided_count
            << " decided at threshold " << gaze::format_double(threshold)
            << "; log written to " << out << "\n";
  return 0;
}

int run_eval(const std::string& frames_path, gaze::Protocol protocol,
             const gaze::RegionScheme& scheme, const EvalFlags& flags,
             double threshold, int reps, std::uint64_t seed,
             const std::string& out_dir, bool with_log) {
  const gaze::Dataset dataset = gaze::load_frames(frames_path);
  const gaze::EvalParams params = flags.to_params();
  const gaze::EvalOutcomes outcomes =
      protocol == gaze::Protocol::Global
          ? gaze::run_global_outcomes(dataset, scheme, params, reps, seed)
          : gaze::run_user_based_outcomes(dataset, scheme, params, reps, seed);
  const gaze::EvalReport report = gaze::summarize(outcomes, threshold);

  fs::create_directories(out_dir);
  const std::string base =
      std::string(protocol == gaze::Protocol::Global ? "global" : "user") +
      "_" + (scheme.mode == gaze::SchemeMode::SixClass ? "six" : "two");
  gaze::write_report(report, fs::path(out_dir) / (base + ".report"));
  gaze::write_confusion_csv(report,
                            fs::path(out_dir) / (base + "_confusion.csv"));
  if (with_log) {
    gaze::write_decision_log(outcomes, threshold,
                             fs::path(out_dir) / (base + "_decisions.csv"));
  }
  gaze::write_subject_svg(report, fs::path(out_dir) / (base + "_subjects.svg"));
  std::cout << base << ": mean accuracy "
            << gaze::format_double(report.mean_accuracy) << " (std "
            << gaze::format_double(report.std_accuracy) << ") over "
            << report.repetitions << " repetitions; decision fraction "
            << gaze::format_double(report.decision_fraction)
            << "; reports in " << out_dir << "\n";
  return 0;
}

int run_sweep(const std::string& frames_path, const gaze::RegionScheme& scheme,
              const EvalFlags& flags, const std::vector<double>& thresholds,
              int reps, std::uint64_t seed, const std::string& out_dir) {
  const gaze::Dataset dataset = gaze::load_frames(frames_path);
  const auto points = gaze::sweep_confidence(dataset, scheme,
                                             flags.to_params(), thresholds,
                                             reps, seed);
  fs::create_directories(out_dir);
  gaze::write_sweep_csv(points, fs::path(out_dir) / "sweep.csv");
  gaze::write_sweep_svg(points, fs::path(out_dir) / "sweep.svg");
  std::cout << "swept " << points.size() << " thresholds; results in "
            << out_dir << "\n";
  return 0;
}

int run_bench(const std::string& model_path, const std::string& frames_path,
              int iterations, bool strict) {
  const gaze::Model model = gaze::load_model(model_path);
  const gaze::Dataset dataset = gaze::load_frames(frames_path);
  const auto timings = gaze::bench_pipeline(model, dataset, iterations);

  bool all_pass = true;
  std::printf("%-20s %9s %11s %11s %11s   %s\n", "stage", "samples", "mean_ms",
              "p95_ms", "max_ms", "budget");
  for (const auto& t : timings) {
    const bool pass = t.mean_ms < gaze::kStageBudgetMs && t.samples > 0;
    all_pass = all_pass && pass;
    std::printf("%-20s %9zu %11.4f %11.4f %11.4f   %s\n", t.stage.c_str(),
                t.samples, t.mean_ms, t.p95_ms, t.max_ms,
                pass ? "PASS" : "FAIL");
    if (strict && t.samples < 100) {
      std::cerr << "error: stage " << t.stage << " has fewer than 100 samples;"
                << " raise --iterations\n";
      return 1;
    }
  }
  std::printf("budget: %.1f ms per stage, single core\n",
              gaze::kStageBudgetMs);
  if (strict && !all_pass) {
    std::cerr << "error: latency budget exceeded\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driver gaze region classification from facial landmarks"};
  app.require_subcommand(1);
  app.fallthrough();

  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = auto)")
      ->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic landmark stream");
  gaze::GenConfig config;
  std::string gen_out;
  std::string pose_texts[gaze::kNumRegions];
  gen->add_option("--out", gen_out, "output frame file")->required();
  gen->add_option("--subjects", config.n_subjects)->capture_default_str();
  gen->add_option("--frames-per-glance", config.frames_per_glance)
      ->capture_default_str();
  gen->add_option("--glances-per-region", config.glances_per_region)
      ->capture_default_str();
  gen->add_option("--kappa", config.head_coupling_kappa,
                  "head/eye coupling in [0,1]")
      ->capture_default_str();
  gen->add_option("--subject-offset-sigma", config.subject_offset_sigma_deg,
                  "per-subject pose offset sigma (deg)")
      ->capture_default_str();
  gen->add_option("--noise-sigma", config.noise_sigma_px,
                  "landmark pixel noise sigma")
      ->capture_default_str();
  gen->add_option("--camera-scale", config.camera_scale_px)
      ->capture_default_str();
  gen->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
  gen->add_option("--pose-road", pose_texts[0], "yaw,pitch degrees");
  gen->add_option("--pose-center-stack", pose_texts[1], "yaw,pitch degrees");
  gen->add_option("--pose-instrument-cluster", pose_texts[2],
                  "yaw,pitch degrees");
  gen->add_option("--pose-rearview-mirror", pose_texts[3],
                  "yaw,pitch degrees");
  gen->add_option("--pose-left", pose_texts[4], "yaw,pitch degrees");
  gen->add_option("--pose-right", pose_texts[5], "yaw,pitch degrees");

  // train
  auto* train = app.add_subcommand("train", "train a model on a frame file");
  std::string train_frames, train_out, train_scheme = "six";
  std::uint64_t train_seed = 0;
  EvalFlags train_flags;
  train->add_option("--frames", train_frames)->required();
  train->add_option("--out", train_out, "output model file")->required();
  train->add_option("--scheme", train_scheme, "six|two")
      ->capture_default_str();
  train->add_option("--seed", train_seed, "RNG seed")->required();
  train_flags.add_to(train);

  // predict
  auto* predict = app.add_subcommand("predict",
                                     "classify frames with a trained model");
  std::string predict_model, predict_frames, predict_out;
  double predict_threshold = 1.0;
  predict->add_option("--model", predict_model)->required();
  predict->add_option("--frames", predict_frames)->required();
  predict->add_option("--out", predict_out, "decision log CSV")->required();
  predict->add_option("--threshold", predict_threshold,
                      "confidence threshold (>= 1)")
      ->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "run an evaluation protocol");
  std::string eval_frames, eval_protocol, eval_scheme = "six",
              eval_out_dir = ".";
  double eval_threshold = 1.0;
  int eval_reps = 10;
  std::uint64_t eval_seed = 0;
  bool eval_log = false;
  EvalFlags eval_flags;
  eval->add_option("--frames", eval_frames)->required();
  eval->add_option("--protocol", eval_protocol, "global|user")->required();
  eval->add_option("--scheme", eval_scheme, "six|two")->capture_default_str();
  eval->add_option("--threshold", eval_threshold)->capture_default_str();
  eval->add_option("--reps", eval_reps, "repetitions")->capture_default_str();
  eval->add_option("--seed", eval_seed, "RNG seed")->required();
  eval->add_option("--out-dir", eval_out_dir)->capture_default_str();
  eval->add_flag("--log", eval_log, "write per-frame decision log");
  eval_flags.add_to(eval);

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "accuracy vs confidence threshold (user-based)");
  std::string sweep_frames, sweep_scheme = "six", sweep_out_dir = ".",
              sweep_thresholds;
  int sweep_reps = 10;
  std::uint64_t sweep_seed = 0;
  EvalFlags sweep_flags;
  sweep->add_option("--frames", sweep_frames)->required();
  sweep->add_option("--scheme", sweep_scheme, "six|two")
      ->capture_default_str();
  sweep->add_option("--thresholds", sweep_thresholds,
                    "comma-separated ascending list, all >= 1")
      ->required();
  sweep->add_option("--reps", sweep_reps)->capture_default_str();
  sweep->add_option("--seed", sweep_seed, "RNG seed")->required();
  sweep->add_option("--out-dir", sweep_out_dir)->capture_default_str();
  sweep_flags.add_to(sweep);

  // bench
  auto* bench = app.add_subcommand("bench", "per-stage latency benchmark");
  std::string bench_model, bench_frames;
  int bench_iterations = 1000;
  bool bench_strict = false;
  bench->add_option("--model", bench_model)->required();
  bench->add_option("--frames", bench_frames)->required();
  bench->add_option("--iterations", bench_iterations)->capture_default_str();
  bench->add_flag("--strict", bench_strict,
                  "exit nonzero when a stage exceeds the 10 ms budget");

  CLI11_PARSE(app, argc, argv);
  gaze::set_worker_threads(threads);

  try {
    if (gen->parsed()) {
      for (int r = 0; r < gaze::kNumRegions; ++r) {
        if (!pose_texts[r].empty()) parse_pose(pose_texts[r], config.region_pose[r]);
      }
      return run_gen(config, gen_out);
    }
    if (train->parsed()) {
      return run_train(train_frames, train_out, parse_scheme(train_scheme),
                       train_flags, train_seed);
    }
    if (predict->parsed()) {
      if (!(predict_threshold >= 1.0)) {
        throw gaze::Error("threshold must be >= 1");
      }
      return run_predict(predict_model, predict_frames, predict_threshold,
                         predict_out);
    }
    if (eval->parsed()) {
      gaze::Protocol protocol;
      if (eval_protocol == "global") {
        protocol = gaze::Protocol::Global;
      } else if (eval_protocol == "user") {
        protocol = gaze::Protocol::UserBased;
      } else {
        throw gaze::Error("unknown protocol '" + eval_protocol +
                          "' (expected global|user)");
      }
      return run_eval(eval_frames, protocol, parse_scheme(eval_scheme),
                      eval_flags, eval_threshold, eval_reps, eval_seed,
                      eval_out_dir, eval_log);
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_frames, parse_scheme(sweep_scheme), sweep_flags,
                       parse_threshold_list(sweep_thresholds), sweep_reps,
                       sweep_seed, sweep_out_dir);
    }
    if (bench->parsed()) {
      return run_bench(bench_model, bench_frames, bench_iterations,
                       bench_strict);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
