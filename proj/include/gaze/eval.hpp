#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gaze/dataset.hpp"
#include "gaze/forest.hpp"
#include "gaze/normalize.hpp"
#include "gaze/types.hpp"

namespace gaze {

// User-based enrollment: 90 consecutive frames (3 s at 30 fps) per class,
// with at least 900 frames (30 s) between the last training frame and the
// first testing frame.
constexpr std::uint64_t kEnrollmentFrames = 90;
constexpr std::uint64_t kSeparationFrames = 900;

enum class Protocol { Global, UserBased };

// Rows are true classes, columns predicted; cells count non-abstained
// decisions, so accuracy == trace / total.
struct ConfusionMatrix {
  int n_classes = 0;
  std::vector<std::uint64_t> counts;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int n)
      : n_classes(n), counts(static_cast<std::size_t>(n) * n, 0) {}

  std::uint64_t& at(int true_cls, int pred) {
    return counts[static_cast<std::size_t>(true_cls) * n_classes + pred];
  }
  std::uint64_t at(int true_cls, int pred) const {
    return counts[static_cast<std::size_t>(true_cls) * n_classes + pred];
  }
  void add(int true_cls, int pred) { at(true_cls, pred) += 1; }

  std::uint64_t total() const;
  std::uint64_t trace() const;
  double accuracy() const;  // NaN when empty
};

// Six-class class indices coincide with region codes; collapsing maps both
// axes through the two-class scheme.
int two_class_of_six(int six_cls);
ConfusionMatrix collapse_to_two_class(const ConfusionMatrix& six);

// One evaluated frame of one repetition, before pruning: the predicted class
// is threshold-independent, so a single record serves every threshold.
struct FrameRecord {
  std::int32_t subject = 0;  // index into EvalOutcomes::subject_ids
  std::uint64_t frame_index = 0;
  std::int16_t true_class = 0;
  std::int16_t predicted = 0;
  double confidence = 1.0;
};

struct RepOutcome {
  std::vector<FrameRecord> records;
  std::vector<std::string> excluded;  // "subject: reason" entries
};

// Raw per-frame results of all repetitions of one protocol run.
struct EvalOutcomes {
  RegionScheme scheme;
  Protocol protocol = Protocol::Global;
  std::vector<std::string> subject_ids;
  std::vector<RepOutcome> reps;
};

struct SubjectAccuracy {
  double mean = 0.0;
  double std = 0.0;
  int reps = 0;
};

struct EvalReport {
  RegionScheme scheme;
  Protocol protocol = Protocol::Global;
  double threshold = 1.0;
  int repetitions = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  bool accuracy_defined = false;  // false when no frame was decided
  std::vector<double> rep_accuracies;
  std::vector<ConfusionMatrix> rep_confusions;
  std::vector<double> mean_confusion;  // n_classes^2 cell means
  int n_classes = 0;
  std::size_t evaluated_frames = 0;
  std::size_t decided_frames = 0;
  double decision_fraction = 0.0;
  double mean_decision_period_s = 0.0;  // video seconds per decision, pooled
  std::map<std::string, SubjectAccuracy> per_subject_accuracy;
  std::vector<std::string> excluded_subjects;
  // Six-class runs carry the collapsed two-class accuracy over the same
  // decided frames; coarsening can never lower it below mean_accuracy.
  double two_class_view_accuracy = 0.0;
};

struct EvalParams {
  ForestParams forest;  // seed is ignored; streams derive from the run seed
  int rfe_forest_size = 50;
  int rfe_max_depth = 30;
  std::size_t rfe_sample_cap_per_class = 300;        // 0 = no cap
  std::size_t train_cap_per_class_per_subject = 0;   // global only; 0 = all
  int context_window = kCalibrationWindowFrames;
};

// Open-world protocol: per repetition, subjects split 80/20 into train/test
// (exactly 40/10 at 50 subjects), one model trained on all training-subject
// frames, evaluated on a balanced test set drawn per test subject.
EvalOutcomes run_global_outcomes(const Dataset& dataset,
                                 const RegionScheme& scheme,
                                 const EvalParams& params, int repetitions,
                                 std::uint64_t seed);

// Enrollment protocol: per repetition and subject, one 90-frame run per
// class is drawn uniformly among eligible runs, a per-subject model is
// trained on those frames, and testing uses a balanced set drawn from frames
// at least 900 frame indices after the last training frame. Subjects without
// an eligible run for every class are excluded with a report entry.
EvalOutcomes run_user_based_outcomes(const Dataset& dataset,
                                     const RegionScheme& scheme,
                                     const EvalParams& params, int repetitions,
                                     std::uint64_t seed);

EvalReport summarize(const EvalOutcomes& outcomes, double threshold);

EvalReport run_global(const Dataset& dataset, const RegionScheme& scheme,
                      const EvalParams& params, double threshold,
                      int repetitions, std::uint64_t seed);

EvalReport run_user_based(const Dataset& dataset, const RegionScheme& scheme,
                          const EvalParams& params, double threshold,
                          int repetitions, std::uint64_t seed);

struct SweepPoint {
  double threshold = 1.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  bool accuracy_defined = false;
  double mean_decision_period_s = 0.0;
  double decision_fraction = 0.0;
};

// One user-based pass per repetition; each threshold re-filters the same
// decisions, so decided sets are nested across the sweep.
std::vector<SweepPoint> sweep_confidence(const Dataset& dataset,
                                         const RegionScheme& scheme,
                                         const EvalParams& params,
                                         const std::vector<double>& thresholds,
                                         int repetitions, std::uint64_t seed);

std::vector<SweepPoint> sweep_from_outcomes(
    const EvalOutcomes& outcomes, const std::vector<double>& thresholds);

}  // namespace gaze
