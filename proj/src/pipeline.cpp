#include "gaze/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "gaze/error.hpp"
#include "gaze/matrix.hpp"
#include "gaze/rng.hpp"

namespace gaze {

namespace {

// Evenly strided subset of [0, m); all of it when cap == 0 or cap >= m.
std::vector<std::size_t> strided_subset(std::size_t m, std::size_t cap) {
  std::vector<std::size_t> out;
  if (cap == 0 || cap >= m) {
    out.resize(m);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  out.reserve(cap);
  for (std::size_t i = 0; i < cap; ++i) out.push_back(i * m / cap);
  return out;
}

}  // namespace

TrainedPipeline train_pipeline(const std::vector<Shape>& shapes,
                               const std::vector<int>& labels, int n_classes,
                               const EvalParams& params, std::uint64_t rfe_seed,
                               std::uint64_t forest_seed) {
  std::vector<std::size_t> rfe_rows;
  {
    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      by_class[labels[i]].push_back(i);
    }
    for (const auto& rows : by_class) {
      for (const std::size_t k :
           strided_subset(rows.size(), params.rfe_sample_cap_per_class)) {
        rfe_rows.push_back(rows[k]);
      }
    }
    std::sort(rfe_rows.begin(), rfe_rows.end());
  }
  std::vector<Shape> rfe_shapes;
  std::vector<int> rfe_labels;
  rfe_shapes.reserve(rfe_rows.size());
  rfe_labels.reserve(rfe_rows.size());
  for (const std::size_t r : rfe_rows) {
    rfe_shapes.push_back(shapes[r]);
    rfe_labels.push_back(labels[r]);
  }

  RfeParams rfe;
  rfe.forest_size = params.rfe_forest_size;
  rfe.max_depth = params.rfe_max_depth;
  rfe.seed = rfe_seed;
  const auto selected = select_landmarks(rfe_shapes, rfe_labels, n_classes,
                                         kSelectedLandmarks, rfe);

  TrainedPipeline pipeline;
  pipeline.plan = build_plan(selected, mean_shape(shapes));

  Matrix X(shapes.size(), pipeline.plan.feature_len());
  for (std::size_t r = 0; r < shapes.size(); ++r) {
    extract(shapes[r], pipeline.plan, X.row(r));
  }
  ForestParams fp = params.forest;
  fp.seed = forest_seed;
  pipeline.forest = train_forest(X, labels, n_classes, fp);
  return pipeline;
}

void collect_training_frames(const SubjectTrack& track,
                             const NormalizationContext& ctx,
                             const RegionScheme& scheme, std::size_t cap,
                             std::vector<Shape>& shapes,
                             std::vector<int>& labels) {
  std::vector<std::vector<std::size_t>> by_class(scheme.n_classes());
  for (std::size_t i = 0; i < track.frames.size(); ++i) {
    if (!track.frames[i].label) continue;
    by_class[scheme.class_of(*track.frames[i].label)].push_back(i);
  }
  std::vector<std::size_t> rows;
  for (const auto& class_rows : by_class) {
    for (const std::size_t k : strided_subset(class_rows.size(), cap)) {
      rows.push_back(class_rows[k]);
    }
  }
  std::sort(rows.begin(), rows.end());
  for (const std::size_t i : rows) {
    shapes.push_back(normalize_frame(track.frames[i], ctx));
    labels.push_back(scheme.class_of(*track.frames[i].label));
  }
}

Model train_model(const Dataset& dataset, const RegionScheme& scheme,
                  const EvalParams& params, std::uint64_t seed) {
  if (dataset.subjects.empty()) throw Error("train_model: empty dataset");

  Model model;
  model.scheme = scheme;
  model.context_window = params.context_window;
  for (const auto& subject : dataset.subjects) {
    model.contexts.push_back(
        compute_context(subject.frames, params.context_window));
  }

  const int n_classes = scheme.n_classes();
  std::vector<Shape> shapes;
  std::vector<int> labels;
  for (std::size_t s = 0; s < dataset.subjects.size(); ++s) {
    collect_training_frames(dataset.subjects[s], model.contexts[s], scheme,
                            params.train_cap_per_class_per_subject, shapes,
                            labels);
  }
  if (shapes.empty()) throw Error("train_model: no labeled frames");

  TrainedPipeline pipeline =
      train_pipeline(shapes, labels, n_classes, params,
                     derive_seed(seed, 0x8FE), derive_seed(seed, 0xF0));
  model.plan = std::move(pipeline.plan);
  model.forest = std::move(pipeline.forest);
  return model;
}

}  // namespace gaze
