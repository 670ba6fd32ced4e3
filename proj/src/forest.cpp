#include "gaze/forest.hpp"

#include <algorithm>
#include <cmath>

#include "gaze/error.hpp"
#include "gaze/kernels.hpp"
#include "gaze/parallel.hpp"
#include "gaze/rng.hpp"

namespace gaze {

namespace {

using int128 = __int128;

struct ValueLabel {
  double value;
  std::int32_t label;
};

// Sum over classes of squared class counts; the Gini comparisons below are
// carried out on these integer sums so that split selection never depends on
// floating-point rounding.
std::int64_t squared_sum(std::span<const std::uint32_t> counts) {
  std::int64_t s = 0;
  for (const std::uint32_t c : counts) {
    s += static_cast<std::int64_t>(c) * c;
  }
  return s;
}

double gini_from_counts(std::span<const std::uint32_t> counts,
                        std::uint32_t total) {
  if (total == 0) return 0.0;
  double acc = 0.0;
  for (const std::uint32_t c : counts) {
    const double f = static_cast<double>(c) / total;
    acc += f * f;
  }
  return 1.0 - acc;
}

struct SplitChoice {
  bool found = false;
  std::int32_t feature = -1;
  double threshold = 0.0;
  // Score is (sum_sq_left / n_left + sum_sq_right / n_right) as the exact
  // rational num/den; larger is better.
  std::int64_t num = 0;
  std::int64_t den = 1;
  std::uint32_t n_left = 0;
  double child_gini_weighted = 0.0;  // for importances only
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, std::span<const int> y, int n_classes,
              const ForestParams& params, int features_per_split,
              std::uint64_t tree_seed)
      : x_(X),
        y_(y),
        n_classes_(n_classes),
        params_(params),
        features_per_split_(features_per_split),
        rng_(tree_seed) {
    const std::size_t n = X.rows;
    samples_.resize(n);
    if (params.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) {
        samples_[i] = static_cast<std::uint32_t>(rng_.bounded(n));
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        samples_[i] = static_cast<std::uint32_t>(i);
      }
    }
    feature_pool_.resize(X.cols);
    for (std::size_t f = 0; f < X.cols; ++f) {
      feature_pool_[f] = static_cast<std::int32_t>(f);
    }
    importance_.assign(X.cols, 0.0);
  }

  Tree build() {
    grow(0, samples_.size(), 0);
    return std::move(tree_);
  }

  std::span<const double> importance() const { return importance_; }

 private:
  std::vector<std::uint32_t> count_classes(std::size_t lo,
                                           std::size_t hi) const {
    std::vector<std::uint32_t> counts(n_classes_, 0);
    for (std::size_t i = lo; i < hi; ++i) counts[y_[samples_[i]]] += 1;
    return counts;
  }

  std::int32_t make_leaf(const std::vector<std::uint32_t>& counts) {
    Tree::Node node;
    node.feature = -1;
    node.counts_begin = static_cast<std::uint32_t>(tree_.leaf_counts.size());
    tree_.leaf_counts.insert(tree_.leaf_counts.end(), counts.begin(),
                             counts.end());
    tree_.nodes.push_back(node);
    return static_cast<std::int32_t>(tree_.nodes.size() - 1);
  }

  // Candidate features for this node: features_per_split distinct indices,
  // returned in ascending order so the lowest-index tie rule falls out of
  // the scan order.
  std::vector<std::int32_t> sample_features() {
    const std::size_t d = feature_pool_.size();
    const std::size_t k = static_cast<std::size_t>(features_per_split_);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng_.bounded(d - i);
      std::swap(feature_pool_[i], feature_pool_[j]);
    }
    std::vector<std::int32_t> chosen(feature_pool_.begin(),
                                     feature_pool_.begin() + k);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  SplitChoice best_split(std::size_t lo, std::size_t hi,
                         const std::vector<std::uint32_t>& parent_counts) {
    const std::uint32_t total = static_cast<std::uint32_t>(hi - lo);
    const std::int64_t parent_sq = squared_sum(parent_counts);
    SplitChoice best;

    const auto features = sample_features();
    auto& sorted = sorted_scratch_;
    std::vector<std::uint32_t> left(n_classes_), right(n_classes_);

    for (const std::int32_t f : features) {
      sorted.clear();
      sorted.reserve(total);
      for (std::size_t i = lo; i < hi; ++i) {
        sorted.push_back(ValueLabel{x_.at(samples_[i], f), y_[samples_[i]]});
      }
      std::sort(sorted.begin(), sorted.end(),
                [](const ValueLabel& a, const ValueLabel& b) {
                  return a.value < b.value;
                });
      if (sorted.front().value == sorted.back().value) continue;

      std::fill(left.begin(), left.end(), 0u);
      std::copy(parent_counts.begin(), parent_counts.end(), right.begin());
      std::int64_t sq_left = 0;
      std::int64_t sq_right = parent_sq;

      for (std::uint32_t i = 0; i + 1 < total; ++i) {
        const std::int32_t cls = sorted[i].label;
        sq_left += 2 * static_cast<std::int64_t>(left[cls]) + 1;
        left[cls] += 1;
        sq_right -= 2 * static_cast<std::int64_t>(right[cls]) - 1;
        right[cls] -= 1;
        if (sorted[i].value == sorted[i + 1].value) continue;

        const std::uint32_t n_left = i + 1;
        const std::uint32_t n_right = total - n_left;
        const std::int64_t num = sq_left * n_right + sq_right * n_left;
        const std::int64_t den =
            static_cast<std::int64_t>(n_left) * n_right;
        // Must strictly decrease impurity:
        //   sq_l/n_l + sq_r/n_r > sq_p/n_p
        if (static_cast<int128>(num) * total <=
            static_cast<int128>(parent_sq) * den) {
          continue;
        }
        if (best.found && static_cast<int128>(num) * best.den <=
                              static_cast<int128>(best.num) * den) {
          continue;
        }
        double threshold = 0.5 * (sorted[i].value + sorted[i + 1].value);
        if (threshold >= sorted[i + 1].value) threshold = sorted[i].value;

        best.found = true;
        best.feature = f;
        best.threshold = threshold;
        best.num = num;
        best.den = den;
        best.n_left = n_left;
        best.child_gini_weighted =
            (static_cast<double>(n_left) / total) *
                (1.0 - static_cast<double>(sq_left) /
                           (static_cast<double>(n_left) * n_left)) +
            (static_cast<double>(n_right) / total) *
                (1.0 - static_cast<double>(sq_right) /
                           (static_cast<double>(n_right) * n_right));
      }
    }
    return best;
  }

  std::int32_t grow(std::size_t lo, std::size_t hi, int depth) {
    const auto counts = count_classes(lo, hi);
    const std::uint32_t total = static_cast<std::uint32_t>(hi - lo);
    const bool pure =
        std::any_of(counts.begin(), counts.end(),
                    [&](std::uint32_t c) { return c == total; });
    if (pure || depth >= params_.max_depth ||
        total < static_cast<std::uint32_t>(params_.min_samples_split)) {
      return make_leaf(counts);
    }

    const SplitChoice split = best_split(lo, hi, counts);
    if (!split.found) return make_leaf(counts);

    const auto mid_it = std::partition(
        samples_.begin() + lo, samples_.begin() + hi, [&](std::uint32_t s) {
          return x_.at(s, split.feature) <= split.threshold;
        });
    const std::size_t mid = static_cast<std::size_t>(
        mid_it - samples_.begin());

    // Weighted impurity decrease for feature importances.
    const double node_gini = gini_from_counts(counts, total);
    const double weight = static_cast<double>(total) / samples_.size();
    importance_[split.feature] +=
        weight * (node_gini - split.child_gini_weighted);

    const std::int32_t index = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.push_back(Tree::Node{});
    tree_.nodes[index].feature = split.feature;
    tree_.nodes[index].threshold = split.threshold;
    const std::int32_t left_child = grow(lo, mid, depth + 1);
    const std::int32_t right_child = grow(mid, hi, depth + 1);
    tree_.nodes[index].left = left_child;
    tree_.nodes[index].right = right_child;
    return index;
  }

  const Matrix& x_;
  std::span<const int> y_;
  const int n_classes_;
  const ForestParams& params_;
  const int features_per_split_;
  Rng rng_;
  std::vector<std::uint32_t> samples_;
  std::vector<std::int32_t> feature_pool_;
  std::vector<ValueLabel> sorted_scratch_;
  std::vector<double> importance_;
  Tree tree_;
};

}  // namespace

Forest train_forest(const Matrix& X, std::span<const int> y, int n_classes,
                    const ForestParams& params) {
  if (X.rows == 0) throw Error("train_forest: empty training set");
  if (X.rows != y.size()) throw Error("train_forest: X/y size mismatch");
  if (n_classes < 1) throw Error("train_forest: need at least one class");
  for (const int label : y) {
    if (label < 0 || label >= n_classes) {
      throw Error("train_forest: label out of range");
    }
  }
  if (params.n_trees < 1 || params.max_depth < 1 ||
      params.min_samples_split < 1) {
    throw Error("train_forest: parameters must be positive");
  }
  int fps = params.features_per_split;
  if (fps == 0) {
    fps = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(X.cols))));
  }
  if (fps < 1 || fps > static_cast<int>(X.cols)) {
    throw Error("train_forest: features_per_split out of range");
  }

  Forest forest;
  forest.n_classes = n_classes;
  forest.n_features = static_cast<int>(X.cols);
  forest.params = params;
  forest.trees.resize(params.n_trees);

  std::vector<std::vector<double>> tree_importance(params.n_trees);
  parallel_for(params.n_trees, [&](std::size_t t) {
    TreeBuilder builder(X, y, n_classes, params, fps,
                        derive_seed(params.seed, 0x7EE5, t));
    forest.trees[t] = builder.build();
    tree_importance[t].assign(builder.importance().begin(),
                              builder.importance().end());
  });

  // Mean across trees of total weighted decrease, normalized to sum 1.
  forest.importances.assign(X.cols, 0.0);
  for (const auto& imp : tree_importance) {
    kernels::active_ops().vec_accumulate(forest.importances.data(), imp.data(),
                                         imp.size());
  }
  double sum = 0.0;
  for (const double v : forest.importances) sum += v;
  if (sum > 0.0) {
    kernels::active_ops().vec_scale(forest.importances.data(),
                                    forest.importances.size(), 1.0 / sum);
  } else {
    std::fill(forest.importances.begin(), forest.importances.end(),
              1.0 / static_cast<double>(X.cols));
  }
  return forest;
}

ProbVector Forest::predict_proba(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_features)) {
    throw Error("predict_proba: feature dimension mismatch");
  }
  const auto& ops = kernels::active_ops();
  ProbVector acc(n_classes, 0.0);
  for (const Tree& tree : trees) {
    const Tree::Node* node = tree.nodes.data();
    while (node->feature >= 0) {
      node = tree.nodes.data() +
             (x[node->feature] <= node->threshold ? node->left : node->right);
    }
    const std::uint32_t* counts = tree.leaf_counts.data() + node->counts_begin;
    std::uint32_t total = 0;
    for (int c = 0; c < n_classes; ++c) total += counts[c];
    ops.leaf_accumulate(acc.data(), counts, n_classes,
                        static_cast<double>(total));
  }
  ops.vec_scale(acc.data(), acc.size(), 1.0 / static_cast<double>(trees.size()));
  return acc;
}

}  // namespace gaze
