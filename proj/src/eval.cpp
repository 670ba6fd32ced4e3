#include "gaze/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gaze/decide.hpp"
#include "gaze/error.hpp"
#include "gaze/features.hpp"
#include "gaze/matrix.hpp"
#include "gaze/pipeline.hpp"
#include "gaze/rng.hpp"

namespace gaze {

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (int c = 0; c < n_classes; ++c) t += at(c, c);
  return t;
}

double ConfusionMatrix::accuracy() const {
  const std::uint64_t n = total();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(trace()) / static_cast<double>(n);
}

int two_class_of_six(int six_cls) {
  return RegionScheme::two().class_of(region_from_code(six_cls));
}

ConfusionMatrix collapse_to_two_class(const ConfusionMatrix& six) {
  if (six.n_classes != kNumRegions) {
    throw Error("collapse_to_two_class: expected a 6-class matrix");
  }
  ConfusionMatrix two(2);
  for (int t = 0; t < kNumRegions; ++t) {
    for (int p = 0; p < kNumRegions; ++p) {
      two.at(two_class_of_six(t), two_class_of_six(p)) += six.at(t, p);
    }
  }
  return two;
}

namespace {

constexpr std::uint64_t kTagRep = 0x9E9;
constexpr std::uint64_t kTagSplit = 0x51;
constexpr std::uint64_t kTagRfe = 0x8FE;
constexpr std::uint64_t kTagForest = 0xF0;
constexpr std::uint64_t kTagBalance = 0xBA;
constexpr std::uint64_t kTagRuns = 0x90;

void evaluate_frames(const SubjectTrack& track, std::int32_t subject_index,
                     const NormalizationContext& ctx,
                     const TrainedPipeline& pipeline,
                     const RegionScheme& scheme,
                     std::vector<FrameRecord>& out) {
  std::vector<double> features(pipeline.plan.feature_len());
  for (const LandmarkFrame& frame : track.frames) {
    if (!frame.label) continue;
    const Shape normalized = normalize_frame(frame, ctx);
    extract(normalized, pipeline.plan, features.data());
    const ProbVector probs = pipeline.forest.predict_proba(features);
    FrameRecord rec;
    rec.subject = subject_index;
    rec.frame_index = frame.frame_index;
    rec.true_class = static_cast<std::int16_t>(scheme.class_of(*frame.label));
    rec.predicted = static_cast<std::int16_t>(argmax_class(probs));
    rec.confidence = confidence(probs);
    out.push_back(rec);
  }
}

std::vector<NormalizationContext> all_contexts(const Dataset& dataset,
                                               int window) {
  std::vector<NormalizationContext> contexts;
  contexts.reserve(dataset.subjects.size());
  for (const auto& subject : dataset.subjects) {
    contexts.push_back(compute_context(subject.frames, window));
  }
  return contexts;
}

RepOutcome global_repetition(const Dataset& dataset,
                             const RegionScheme& scheme,
                             const EvalParams& params,
                             const std::vector<NormalizationContext>& contexts,
                             std::uint64_t rep_seed) {
  const std::size_t n_subjects = dataset.subjects.size();
  const int n_classes = scheme.n_classes();

  std::vector<std::size_t> order(n_subjects);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng(derive_seed(rep_seed, kTagSplit));
  split_rng.shuffle(order.data(), order.size());
  std::size_t n_train = static_cast<std::size_t>(
      std::lround(0.8 * static_cast<double>(n_subjects)));
  n_train = std::clamp<std::size_t>(n_train, 1, n_subjects - 1);

  std::vector<std::size_t> train_subjects(order.begin(),
                                          order.begin() + n_train);
  std::vector<std::size_t> test_subjects(order.begin() + n_train, order.end());
  std::sort(train_subjects.begin(), train_subjects.end());
  std::sort(test_subjects.begin(), test_subjects.end());

  for (const std::size_t s : test_subjects) {
    std::vector<std::size_t> counts(n_classes, 0);
    for (const auto& f : dataset.subjects[s].frames) {
      if (f.label) counts[scheme.class_of(*f.label)] += 1;
    }
    for (int c = 0; c < n_classes; ++c) {
      if (counts[c] == 0) {
        throw Error("run_global: test subject " +
                    dataset.subjects[s].subject_id + " has no frames of class '" +
                    scheme.class_name(c) + "'");
      }
    }
  }

  // Training pool, optionally capped per (subject, class); the cap takes a
  // strided subset across the subject's stream so every glance region of a
  // pooled class stays represented.
  std::vector<Shape> shapes;
  std::vector<int> labels;
  for (const std::size_t s : train_subjects) {
    collect_training_frames(dataset.subjects[s], contexts[s], scheme,
                            params.train_cap_per_class_per_subject, shapes,
                            labels);
  }
  if (shapes.empty()) throw Error("run_global: no labeled training frames");

  const TrainedPipeline pipeline =
      train_pipeline(shapes, labels, n_classes, params,
                     derive_seed(rep_seed, kTagRfe),
                     derive_seed(rep_seed, kTagForest));

  RepOutcome outcome;
  for (const std::size_t s : test_subjects) {
    Dataset single;
    single.subjects.push_back(dataset.subjects[s]);
    const Dataset balanced = balanced_test_set(
        single, scheme, derive_seed(rep_seed, kTagBalance, s));
    if (balanced.subjects.empty()) continue;
    evaluate_frames(balanced.subjects[0], static_cast<std::int32_t>(s),
                    contexts[s], pipeline, scheme, outcome.records);
  }
  return outcome;
}

// Maximal frame runs of one scheme class with consecutive frame indices.
struct ClassRun {
  std::size_t begin = 0;  // position in track.frames
  std::size_t end = 0;
  int cls = 0;
};

std::vector<ClassRun> class_runs(const SubjectTrack& track,
                                 const RegionScheme& scheme) {
  std::vector<ClassRun> runs;
  const auto& frames = track.frames;
  std::size_t i = 0;
  while (i < frames.size()) {
    if (!frames[i].label) {
      ++i;
      continue;
    }
    const int cls = scheme.class_of(*frames[i].label);
    std::size_t j = i + 1;
    while (j < frames.size() && frames[j].label &&
           scheme.class_of(*frames[j].label) == cls &&
           frames[j].frame_index == frames[j - 1].frame_index + 1) {
      ++j;
    }
    runs.push_back(ClassRun{i, j, cls});
    i = j;
  }
  return runs;
}

struct EnrollmentWindow {
  std::size_t begin = 0;  // position in track.frames, length kEnrollmentFrames
  std::uint64_t end_index = 0;
};

RepOutcome user_repetition(const Dataset& dataset, const RegionScheme& scheme,
                           const EvalParams& params,
                           const std::vector<NormalizationContext>& contexts,
                           std::uint64_t rep_seed) {
  const int n_classes = scheme.n_classes();
  RepOutcome outcome;

  for (std::size_t s = 0; s < dataset.subjects.size(); ++s) {
    const auto& track = dataset.subjects[s];
    Rng rng(derive_seed(rep_seed, kTagRuns, s));

    // Latest usable enrollment end: every class must still have labeled
    // frames at least kSeparationFrames later.
    std::vector<std::int64_t> max_index(n_classes, -1);
    for (const auto& f : track.frames) {
      if (!f.label) continue;
      max_index[scheme.class_of(*f.label)] =
          static_cast<std::int64_t>(f.frame_index);
    }
    std::int64_t end_limit = std::numeric_limits<std::int64_t>::max();
    bool has_all = true;
    for (int c = 0; c < n_classes; ++c) {
      if (max_index[c] < 0) {
        has_all = false;
        outcome.excluded.push_back(track.subject_id + ": no frames of class '" +
                                   scheme.class_name(c) + "'");
        break;
      }
      end_limit = std::min(end_limit,
                           max_index[c] -
                               static_cast<std::int64_t>(kSeparationFrames));
    }
    if (!has_all) continue;

    const auto runs = class_runs(track, scheme);
    std::vector<std::vector<EnrollmentWindow>> windows(n_classes);
    for (const ClassRun& run : runs) {
      if (run.end - run.begin < kEnrollmentFrames) continue;
      for (std::size_t off = 0;
           off + kEnrollmentFrames <= run.end - run.begin; ++off) {
        const std::size_t begin = run.begin + off;
        const std::uint64_t end_index =
            track.frames[begin + kEnrollmentFrames - 1].frame_index;
        if (static_cast<std::int64_t>(end_index) > end_limit) break;
        windows[run.cls].push_back(EnrollmentWindow{begin, end_index});
      }
    }

    bool eligible = true;
    for (int c = 0; c < n_classes; ++c) {
      if (windows[c].empty()) {
        outcome.excluded.push_back(track.subject_id +
                                   ": no eligible enrollment run for class '" +
                                   scheme.class_name(c) + "'");
        eligible = false;
        break;
      }
    }
    if (!eligible) continue;

    std::vector<Shape> shapes;
    std::vector<int> labels;
    std::uint64_t last_train_index = 0;
    for (int c = 0; c < n_classes; ++c) {
      const EnrollmentWindow& w =
          windows[c][rng.bounded(windows[c].size())];
      last_train_index = std::max(last_train_index, w.end_index);
      for (std::size_t i = 0; i < kEnrollmentFrames; ++i) {
        shapes.push_back(
            normalize_frame(track.frames[w.begin + i], contexts[s]));
        labels.push_back(c);
      }
    }

    const TrainedPipeline pipeline =
        train_pipeline(shapes, labels, n_classes, params,
                       derive_seed(rep_seed, kTagRfe, s),
                       derive_seed(rep_seed, kTagForest, s));

    // Test pool: labeled frames at least kSeparationFrames after enrollment.
    const std::uint64_t test_start = last_train_index + kSeparationFrames;
    Dataset pool;
    SubjectTrack pool_track;
    pool_track.subject_id = track.subject_id;
    for (const auto& f : track.frames) {
      if (f.label && f.frame_index >= test_start) pool_track.frames.push_back(f);
    }
    pool.subjects.push_back(std::move(pool_track));
    const Dataset balanced =
        balanced_test_set(pool, scheme, derive_seed(rep_seed, kTagBalance, s));
    if (balanced.subjects.empty()) continue;
    evaluate_frames(balanced.subjects[0], static_cast<std::int32_t>(s),
                    contexts[s], pipeline, scheme, outcome.records);
  }

  if (outcome.records.empty() && !dataset.subjects.empty()) {
    throw Error("run_user_based: every subject was excluded");
  }
  return outcome;
}

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double acc = 0.0;
  for (const double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

EvalOutcomes run_outcomes(const Dataset& dataset, const RegionScheme& scheme,
                          const EvalParams& params, int repetitions,
                          std::uint64_t seed, Protocol protocol) {
  if (dataset.subjects.size() < 2 && protocol == Protocol::Global) {
    throw Error("run_global: need at least 2 subjects");
  }
  if (dataset.subjects.empty()) throw Error("eval: empty dataset");
  if (repetitions < 1) throw Error("eval: repetitions must be >= 1");

  const auto contexts = all_contexts(dataset, params.context_window);

  EvalOutcomes outcomes;
  outcomes.scheme = scheme;
  outcomes.protocol = protocol;
  for (const auto& s : dataset.subjects) {
    outcomes.subject_ids.push_back(s.subject_id);
  }
  outcomes.reps.resize(repetitions);
  for (int r = 0; r < repetitions; ++r) {
    const std::uint64_t rep_seed = derive_seed(seed, kTagRep, r);
    outcomes.reps[r] =
        protocol == Protocol::Global
            ? global_repetition(dataset, scheme, params, contexts, rep_seed)
            : user_repetition(dataset, scheme, params, contexts, rep_seed);
  }
  return outcomes;
}

}  // namespace

EvalOutcomes run_global_outcomes(const Dataset& dataset,
                                 const RegionScheme& scheme,
                                 const EvalParams& params, int repetitions,
                                 std::uint64_t seed) {
  return run_outcomes(dataset, scheme, params, repetitions, seed,
                      Protocol::Global);
}

EvalOutcomes run_user_based_outcomes(const Dataset& dataset,
                                     const RegionScheme& scheme,
                                     const EvalParams& params, int repetitions,
                                     std::uint64_t seed) {
  return run_outcomes(dataset, scheme, params, repetitions, seed,
                      Protocol::UserBased);
}

EvalReport summarize(const EvalOutcomes& outcomes, double threshold) {
  if (!(threshold >= 1.0)) throw Error("summarize: threshold must be >= 1");
  const int n_classes = outcomes.scheme.n_classes();

  EvalReport report;
  report.scheme = outcomes.scheme;
  report.protocol = outcomes.protocol;
  report.threshold = threshold;
  report.repetitions = static_cast<int>(outcomes.reps.size());
  report.n_classes = n_classes;
  report.mean_confusion.assign(static_cast<std::size_t>(n_classes) * n_classes,
                               0.0);

  std::map<std::string, std::vector<double>> subject_acc;
  std::vector<double> two_view_accs;

  for (const RepOutcome& rep : outcomes.reps) {
    ConfusionMatrix confusion(n_classes);
    std::uint64_t correct_two = 0;
    std::map<std::int32_t, std::pair<std::uint64_t, std::uint64_t>> by_subject;
    for (const FrameRecord& rec : rep.records) {
      report.evaluated_frames += 1;
      if (!(rec.confidence >= threshold)) continue;
      report.decided_frames += 1;
      confusion.add(rec.true_class, rec.predicted);
      auto& [decided, correct] = by_subject[rec.subject];
      decided += 1;
      if (rec.true_class == rec.predicted) correct += 1;
      if (n_classes == kNumRegions &&
          two_class_of_six(rec.true_class) == two_class_of_six(rec.predicted)) {
        correct_two += 1;
      }
    }
    const std::uint64_t decided = confusion.total();
    if (decided > 0) {
      const double acc = confusion.accuracy();
      report.rep_accuracies.push_back(acc);
      if (n_classes == kNumRegions) {
        // Exact coarsening recomputation: merging labels cannot lose
        // correct decisions.
        if (correct_two < confusion.trace()) {
          throw Error("coarsening check failed: two-class correct below "
                      "six-class correct");
        }
        two_view_accs.push_back(static_cast<double>(correct_two) /
                                static_cast<double>(decided));
      }
    }
    report.rep_confusions.push_back(confusion);
    for (std::size_t i = 0; i < confusion.counts.size(); ++i) {
      report.mean_confusion[i] += static_cast<double>(confusion.counts[i]);
    }
    for (const auto& [subject, stats] : by_subject) {
      if (stats.first == 0) continue;
      subject_acc[outcomes.subject_ids[subject]].push_back(
          static_cast<double>(stats.second) /
          static_cast<double>(stats.first));
    }
    for (const auto& excluded : rep.excluded) {
      if (std::find(report.excluded_subjects.begin(),
                    report.excluded_subjects.end(),
                    excluded) == report.excluded_subjects.end()) {
        report.excluded_subjects.push_back(excluded);
      }
    }
  }

  if (!outcomes.reps.empty()) {
    for (double& cell : report.mean_confusion) {
      cell /= static_cast<double>(outcomes.reps.size());
    }
  }

  report.accuracy_defined = !report.rep_accuracies.empty();
  if (report.accuracy_defined) {
    report.mean_accuracy =
        std::accumulate(report.rep_accuracies.begin(),
                        report.rep_accuracies.end(), 0.0) /
        static_cast<double>(report.rep_accuracies.size());
    report.std_accuracy = sample_std(report.rep_accuracies,
                                     report.mean_accuracy);
  } else {
    report.mean_accuracy = std::numeric_limits<double>::quiet_NaN();
    report.std_accuracy = std::numeric_limits<double>::quiet_NaN();
  }
  if (!two_view_accs.empty()) {
    report.two_class_view_accuracy =
        std::accumulate(two_view_accs.begin(), two_view_accs.end(), 0.0) /
        static_cast<double>(two_view_accs.size());
  } else {
    report.two_class_view_accuracy = std::numeric_limits<double>::quiet_NaN();
  }

  report.decision_fraction =
      report.evaluated_frames == 0
          ? 0.0
          : static_cast<double>(report.decided_frames) /
                static_cast<double>(report.evaluated_frames);
  report.mean_decision_period_s =
      report.decided_frames == 0
          ? std::numeric_limits<double>::infinity()
          : (static_cast<double>(report.evaluated_frames) / kFps) /
                static_cast<double>(report.decided_frames);

  for (const auto& [id, accs] : subject_acc) {
    SubjectAccuracy sa;
    sa.reps = static_cast<int>(accs.size());
    sa.mean = std::accumulate(accs.begin(), accs.end(), 0.0) /
              static_cast<double>(accs.size());
    sa.std = sample_std(accs, sa.mean);
    report.per_subject_accuracy[id] = sa;
  }
  return report;
}

EvalReport run_global(const Dataset& dataset, const RegionScheme& scheme,
                      const EvalParams& params, double threshold,
                      int repetitions, std::uint64_t seed) {
  return summarize(
      run_global_outcomes(dataset, scheme, params, repetitions, seed),
      threshold);
}

EvalReport run_user_based(const Dataset& dataset, const RegionScheme& scheme,
                          const EvalParams& params, double threshold,
                          int repetitions, std::uint64_t seed) {
  return summarize(
      run_user_based_outcomes(dataset, scheme, params, repetitions, seed),
      threshold);
}

std::vector<SweepPoint> sweep_from_outcomes(
    const EvalOutcomes& outcomes, const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw Error("sweep: no thresholds");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= 1.0)) {
      throw Error("sweep: thresholds must be >= 1");
    }
    if (i > 0 && thresholds[i] < thresholds[i - 1]) {
      throw Error("sweep: thresholds must be sorted ascending");
    }
  }

  std::vector<SweepPoint> points;
  std::vector<std::uint64_t> prev_decided(outcomes.reps.size(),
                                          std::numeric_limits<std::uint64_t>::max());
  for (const double t : thresholds) {
    const EvalReport report = summarize(outcomes, t);
    // Nesting check: per repetition, the decided set can only shrink as the
    // threshold grows.
    for (std::size_t r = 0; r < outcomes.reps.size(); ++r) {
      std::uint64_t decided = 0;
      for (const FrameRecord& rec : outcomes.reps[r].records) {
        if (rec.confidence >= t) decided += 1;
      }
      if (decided > prev_decided[r]) {
        throw Error("sweep: decided sets are not nested");
      }
      prev_decided[r] = decided;
    }
    SweepPoint point;
    point.threshold = t;
    point.mean_accuracy = report.mean_accuracy;
    point.std_accuracy = report.std_accuracy;
    point.accuracy_defined = report.accuracy_defined;
    point.mean_decision_period_s = report.mean_decision_period_s;
    point.decision_fraction = report.decision_fraction;
    points.push_back(point);
  }
  return points;
}

std::vector<SweepPoint> sweep_confidence(const Dataset& dataset,
                                         const RegionScheme& scheme,
                                         const EvalParams& params,
                                         const std::vector<double>& thresholds,
                                         int repetitions, std::uint64_t seed) {
  const EvalOutcomes outcomes =
      run_user_based_outcomes(dataset, scheme, params, repetitions, seed);
  return sweep_from_outcomes(outcomes, thresholds);
}

}  // namespace gaze
