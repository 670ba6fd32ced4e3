#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "gaze/dataset.hpp"
#include "gaze/forest.hpp"
#include "gaze/matrix.hpp"
#include "gaze/rng.hpp"
#include "gaze/types.hpp"

namespace testutil {

// ---------------------------------------------------------------------------
// In-circle oracle: 4x4 lifted determinant evaluated in long double by
// Gaussian elimination; positive when p lies strictly inside the circumcircle
// of the counter-clockwise triangle (a, b, c).
inline long double incircle_oracle(const gaze::Vec2& a, const gaze::Vec2& b,
                                   const gaze::Vec2& c, const gaze::Vec2& p) {
  long double m[4][4] = {
      {a.x, a.y, (long double)a.x * a.x + (long double)a.y * a.y, 1.0L},
      {b.x, b.y, (long double)b.x * b.x + (long double)b.y * b.y, 1.0L},
      {c.x, c.y, (long double)c.x * c.x + (long double)c.y * c.y, 1.0L},
      {p.x, p.y, (long double)p.x * p.x + (long double)p.y * p.y, 1.0L},
  };
  long double det = 1.0L;
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::fabs((double)m[r][col]) > std::fabs((double)m[pivot][col])) {
        pivot = r;
      }
    }
    if (m[pivot][col] == 0.0L) return 0.0L;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      const long double f = m[r][col] / m[col][col];
      for (int cc = col; cc < 4; ++cc) m[r][cc] -= f * m[col][cc];
    }
  }
  const long double orient =
      ((long double)b.x - a.x) * ((long double)c.y - a.y) -
      ((long double)b.y - a.y) * ((long double)c.x - a.x);
  return orient < 0.0L ? -det : det;
}

// ---------------------------------------------------------------------------
// Exhaustive CART oracle: enumerates every feature and every midpoint
// between consecutive distinct sorted values, scoring splits by exact
// rational Gini comparisons. Mirrors the split contract: strict impurity
// decrease required; ties keep the lowest feature, then lowest threshold.
struct OracleNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::uint32_t> counts;
};

struct OracleTree {
  std::vector<OracleNode> nodes;
};

class CartOracle {
 public:
  CartOracle(const gaze::Matrix& X, std::span<const int> y, int n_classes,
             int max_depth, int min_samples_split)
      : x_(X),
        y_(y),
        n_classes_(n_classes),
        max_depth_(max_depth),
        min_samples_split_(min_samples_split) {}

  OracleTree build() {
    std::vector<std::size_t> all(x_.rows);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    grow(all, 0);
    return std::move(tree_);
  }

 private:
  using int128 = __int128;

  std::vector<std::uint32_t> class_counts(
      const std::vector<std::size_t>& rows) const {
    std::vector<std::uint32_t> counts(n_classes_, 0);
    for (const std::size_t r : rows) counts[y_[r]] += 1;
    return counts;
  }

  static std::int64_t sumsq(const std::vector<std::uint32_t>& counts) {
    std::int64_t s = 0;
    for (const std::uint32_t c : counts) {
      s += (std::int64_t)c * c;
    }
    return s;
  }

  int grow(const std::vector<std::size_t>& rows, int depth) {
    const auto counts = class_counts(rows);
    const std::uint32_t total = (std::uint32_t)rows.size();
    bool pure = false;
    for (const std::uint32_t c : counts) pure = pure || c == total;

    if (pure || depth >= max_depth_ ||
        total < (std::uint32_t)min_samples_split_) {
      return leaf(counts);
    }

    const std::int64_t parent_sq = sumsq(counts);
    bool found = false;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::int64_t best_num = 0, best_den = 1;

    for (std::size_t f = 0; f < x_.cols; ++f) {
      std::vector<double> values;
      values.reserve(rows.size());
      for (const std::size_t r : rows) values.push_back(x_.at(r, f));
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        double thr = 0.5 * (values[i] + values[i + 1]);
        if (thr >= values[i + 1]) thr = values[i];
        std::vector<std::uint32_t> lc(n_classes_, 0), rc(n_classes_, 0);
        std::uint32_t nl = 0;
        for (const std::size_t r : rows) {
          if (x_.at(r, f) <= thr) {
            lc[y_[r]] += 1;
            nl += 1;
          } else {
            rc[y_[r]] += 1;
          }
        }
        const std::uint32_t nr = total - nl;
        const std::int64_t num =
            sumsq(lc) * (std::int64_t)nr + sumsq(rc) * (std::int64_t)nl;
        const std::int64_t den = (std::int64_t)nl * nr;
        if ((int128)num * total <= (int128)parent_sq * den) continue;
        if (found && (int128)num * best_den <= (int128)best_num * den) {
          continue;
        }
        found = true;
        best_feature = (int)f;
        best_threshold = thr;
        best_num = num;
        best_den = den;
      }
    }

    if (!found) return leaf(counts);

    std::vector<std::size_t> lrows, rrows;
    for (const std::size_t r : rows) {
      (x_.at(r, best_feature) <= best_threshold ? lrows : rrows).push_back(r);
    }
    const int index = (int)tree_.nodes.size();
    tree_.nodes.push_back(OracleNode{});
    tree_.nodes[index].feature = best_feature;
    tree_.nodes[index].threshold = best_threshold;
    const int l = grow(lrows, depth + 1);
    const int r = grow(rrows, depth + 1);
    tree_.nodes[index].left = l;
    tree_.nodes[index].right = r;
    return index;
  }

  int leaf(const std::vector<std::uint32_t>& counts) {
    OracleNode node;
    node.counts = counts;
    tree_.nodes.push_back(node);
    return (int)tree_.nodes.size() - 1;
  }

  const gaze::Matrix& x_;
  std::span<const int> y_;
  int n_classes_;
  int max_depth_;
  int min_samples_split_;
  OracleTree tree_;
};

// Structural equality of the oracle tree and an implementation tree, both in
// preorder with identical child order.
inline bool trees_equal(const OracleTree& oracle, const gaze::Tree& tree,
                        int n_classes) {
  if (oracle.nodes.size() != tree.nodes.size()) return false;
  for (std::size_t i = 0; i < oracle.nodes.size(); ++i) {
    const OracleNode& a = oracle.nodes[i];
    const gaze::Tree::Node& b = tree.nodes[i];
    if (a.feature != b.feature) return false;
    if (a.feature >= 0) {
      if (a.threshold != b.threshold || a.left != b.left || a.right != b.right) {
        return false;
      }
    } else {
      for (int c = 0; c < n_classes; ++c) {
        if (a.counts[c] != tree.leaf_counts[b.counts_begin + c]) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Nearest-centroid classifier over normalized positional vectors; the
// separability oracle for the synthetic generator.
class NearestCentroid {
 public:
  void fit(const std::vector<std::vector<double>>& xs,
           const std::vector<int>& ys, int n_classes) {
    const std::size_t d = xs[0].size();
    centroids_.assign(n_classes, std::vector<double>(d, 0.0));
    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      counts[ys[i]] += 1;
      for (std::size_t j = 0; j < d; ++j) centroids_[ys[i]][j] += xs[i][j];
    }
    for (int c = 0; c < n_classes; ++c) {
      if (counts[c] == 0) continue;
      for (double& v : centroids_[c]) v /= (double)counts[c];
    }
  }

  int predict(const std::vector<double>& x) const {
    int best = 0;
    double best_d = dist2(x, centroids_[0]);
    for (std::size_t c = 1; c < centroids_.size(); ++c) {
      const double d = dist2(x, centroids_[c]);
      if (d < best_d) {
        best_d = d;
        best = (int)c;
      }
    }
    return best;
  }

 private:
  static double dist2(const std::vector<double>& a,
                      const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return s;
  }

  std::vector<std::vector<double>> centroids_;
};

// Raw landmark vector of a frame (un-normalized), for the centroid oracle.
inline std::vector<double> flat_landmarks(const gaze::LandmarkFrame& f) {
  std::vector<double> v;
  v.reserve(2 * gaze::kNumLandmarks);
  for (const gaze::Vec2& p : f.landmarks) {
    v.push_back(p.x);
    v.push_back(p.y);
  }
  return v;
}

// Nearest-centroid accuracy with per-subject split: centroids fitted on the
// first half of each subject's frames, evaluated on the second half.
inline double centroid_oracle_accuracy(const gaze::Dataset& dataset) {
  std::vector<std::vector<double>> train_x, test_x;
  std::vector<int> train_y, test_y;
  for (const auto& subject : dataset.subjects) {
    const std::size_t half = subject.frames.size() / 2;
    for (std::size_t i = 0; i < subject.frames.size(); ++i) {
      if (!subject.frames[i].label) continue;
      auto& xs = i < half ? train_x : test_x;
      auto& ys = i < half ? train_y : test_y;
      xs.push_back(flat_landmarks(subject.frames[i]));
      ys.push_back(gaze::region_code(*subject.frames[i].label));
    }
  }
  NearestCentroid model;
  model.fit(train_x, train_y, gaze::kNumRegions);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test_x.size(); ++i) {
    if (model.predict(test_x[i]) == test_y[i]) correct += 1;
  }
  return test_x.empty() ? 0.0 : (double)correct / (double)test_x.size();
}

}  // namespace testutil
