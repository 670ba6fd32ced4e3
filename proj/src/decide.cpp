#include "gaze/decide.hpp"

#include <limits>

#include "gaze/error.hpp"

namespace gaze {

int argmax_class(const ProbVector& probs) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(probs.size()); ++c) {
    if (probs[c] > probs[best]) best = c;
  }
  return best;
}

double confidence(const ProbVector& probs) {
  if (probs.size() < 2) throw Error("confidence: need at least 2 classes");
  double top1 = -1.0, top2 = -1.0;
  for (const double p : probs) {
    if (p > top1) {
      top2 = top1;
      top1 = p;
    } else if (p > top2) {
      top2 = p;
    }
  }
  if (top1 == top2) return 1.0;
  if (top2 == 0.0) return std::numeric_limits<double>::infinity();
  return top1 / top2;
}

std::optional<Decision> prune(ProbVector probs, double threshold) {
  if (!(threshold >= 1.0)) throw Error("classify: threshold must be >= 1");
  const double conf = confidence(probs);
  if (conf < threshold) return std::nullopt;
  Decision d;
  d.predicted = argmax_class(probs);
  d.confidence = conf;
  d.probs = std::move(probs);
  return d;
}

std::optional<Decision> classify(const Forest& forest,
                                 std::span<const double> x, double threshold) {
  return prune(forest.predict_proba(x), threshold);
}

}  // namespace gaze
