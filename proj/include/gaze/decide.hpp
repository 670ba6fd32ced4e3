#pragma once

#include <optional>
#include <span>

#include "gaze/forest.hpp"
#include "gaze/types.hpp"

namespace gaze {

// A non-abstained classification: argmax class (ties to the lowest index),
// the full probability vector, and the top-1/top-2 probability ratio.
// Confidence is at least 1 and may be +infinity.
struct Decision {
  int predicted = 0;
  ProbVector probs;
  double confidence = 1.0;
};

// Ratio of the highest to the second-highest probability. Exactly 1 when the
// two are equal; +infinity when all classes but one have zero probability.
// Throws on fewer than 2 classes.
double confidence(const ProbVector& probs);

int argmax_class(const ProbVector& probs);

// Emits a Decision iff confidence >= threshold, otherwise abstains.
// threshold must be >= 1; threshold 1 never abstains.
std::optional<Decision> classify(const Forest& forest,
                                 std::span<const double> x, double threshold);

std::optional<Decision> prune(ProbVector probs, double threshold);

}  // namespace gaze
