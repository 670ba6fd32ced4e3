#pragma once

#include <string>
#include <vector>

#include "gaze/dataset.hpp"
#include "gaze/model_io.hpp"

namespace gaze {

// Real-time budget per pipeline stage, single core.
constexpr double kStageBudgetMs = 10.0;

struct StageTiming {
  std::string stage;  // normalize | triangulate_angles | extract | predict | decide
  std::size_t samples = 0;
  double mean_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
};

// Times each in-scope stage per frame on a single worker thread, cycling
// through the given frames. The first 10% of iterations are warm-up and are
// excluded from the statistics. Computation is deterministic; timings are
// not. Throws when iterations < 1 or no frames are given.
std::vector<StageTiming> bench_pipeline(const Model& model,
                                        const Dataset& frames, int iterations);

}  // namespace gaze
