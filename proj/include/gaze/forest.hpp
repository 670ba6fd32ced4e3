#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gaze/matrix.hpp"
#include "gaze/types.hpp"

namespace gaze {

struct ForestParams {
  int n_trees = 1000;
  int max_depth = 30;
  int features_per_split = 0;  // 0 resolves to ceil(sqrt(n_features))
  int min_samples_split = 2;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

// Depth-limited CART tree. Nodes are stored in preorder; feature == -1
// marks a leaf, whose per-class sample counts live at
// leaf_counts[counts_begin .. counts_begin + n_classes).
struct Tree {
  struct Node {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t counts_begin = 0;
  };
  std::vector<Node> nodes;
  std::vector<std::uint32_t> leaf_counts;
};

// Bootstrap-bagged ensemble. Class probabilities are the across-tree mean of
// leaf class-count fractions.
struct Forest {
  int n_classes = 0;
  int n_features = 0;
  ForestParams params;
  std::vector<Tree> trees;
  std::vector<double> importances;  // normalized; uniform when no splits

  // Routes x down every tree (x[feature] <= threshold goes left) and
  // averages the per-tree leaf fractions. Entries sum to 1 within 1e-9.
  ProbVector predict_proba(std::span<const double> x) const;

  std::vector<double> feature_importances() const { return importances; }
};

// Grows params.n_trees trees, each on a bootstrap resample of (X, y).
// Splits minimize weighted Gini impurity over features_per_split candidate
// features with thresholds at midpoints between consecutive distinct sorted
// values; ties break toward the lowest feature index, then lowest threshold.
// Impurity comparisons use exact integer arithmetic, so results are
// bit-reproducible for a fixed seed regardless of worker-thread count.
Forest train_forest(const Matrix& X, std::span<const int> y, int n_classes,
                    const ForestParams& params);

}  // namespace gaze
