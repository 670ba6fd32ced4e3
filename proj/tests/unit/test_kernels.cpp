#include <cstring>
#include <vector>

#include <doctest.h>

#include "gaze/kernels.hpp"
#include "gaze/rng.hpp"

using namespace gaze;

namespace {

std::vector<double> random_doubles(Rng& rng, std::size_t n, double lo,
                                   double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels: reference behavior") {
  const auto& ops = kernels::scalar_ops();

  SUBCASE("normalize_points") {
    const double xy[4] = {10.0, 20.0, 30.0, 40.0};
    double out[4];
    ops.normalize_points(xy, 2, 10.0, 20.0, 4.0, 8.0, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 5.0);
    CHECK(out[3] == 2.5);
  }

  SUBCASE("minmax_xy") {
    const double xy[6] = {1.0, 9.0, -3.0, 2.0, 5.0, 4.0};
    double mnx, mny, mxx, mxy;
    ops.minmax_xy(xy, 3, &mnx, &mny, &mxx, &mxy);
    CHECK(mnx == -3.0);
    CHECK(mny == 2.0);
    CHECK(mxx == 5.0);
    CHECK(mxy == 9.0);
  }

  SUBCASE("leaf_accumulate") {
    double acc[2] = {0.0, 0.0};
    const std::uint32_t counts[2] = {3, 1};
    ops.leaf_accumulate(acc, counts, 2, 4.0);
    CHECK(acc[0] == 0.75);
    CHECK(acc[1] == 0.25);
  }
}

TEST_CASE("simd variant matches scalar bit-for-bit") {
  const auto& scalar = kernels::scalar_ops();
  const auto& active = kernels::active_ops();
  INFO("active kernel set: ", active.name);
  if (&active == &scalar) {
    MESSAGE("no SIMD variant on this machine; dispatch equals scalar");
    return;
  }

  Rng rng(20260810);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_points = 1 + rng.bounded(80);
    const auto xy = random_doubles(rng, 2 * n_points, -1e4, 1e4);

    {
      const double cx = rng.uniform(-500, 500), cy = rng.uniform(-500, 500);
      const double w = rng.uniform(0.5, 400), h = rng.uniform(0.5, 400);
      std::vector<double> a(2 * n_points), b(2 * n_points);
      scalar.normalize_points(xy.data(), n_points, cx, cy, w, h, a.data());
      active.normalize_points(xy.data(), n_points, cx, cy, w, h, b.data());
      REQUIRE(bit_equal(a, b));
    }
    {
      double a[4], b[4];
      scalar.minmax_xy(xy.data(), n_points, &a[0], &a[1], &a[2], &a[3]);
      active.minmax_xy(xy.data(), n_points, &b[0], &b[1], &b[2], &b[3]);
      REQUIRE(std::memcmp(a, b, sizeof(a)) == 0);
    }
    {
      const std::size_t n = 1 + rng.bounded(64);
      auto acc_a = random_doubles(rng, n, -10, 10);
      auto acc_b = acc_a;
      const auto x = random_doubles(rng, n, -10, 10);
      scalar.vec_accumulate(acc_a.data(), x.data(), n);
      active.vec_accumulate(acc_b.data(), x.data(), n);
      REQUIRE(bit_equal(acc_a, acc_b));

      const double s = rng.uniform(-3, 3);
      scalar.vec_scale(acc_a.data(), n, s);
      active.vec_scale(acc_b.data(), n, s);
      REQUIRE(bit_equal(acc_a, acc_b));
    }
    {
      const std::size_t k = 2 + rng.bounded(7);
      std::vector<std::uint32_t> counts(k);
      double total = 0.0;
      for (auto& c : counts) {
        c = static_cast<std::uint32_t>(rng.bounded(1000));
        total += c;
      }
      if (total == 0.0) continue;
      auto acc_a = random_doubles(rng, k, 0, 1);
      auto acc_b = acc_a;
      scalar.leaf_accumulate(acc_a.data(), counts.data(), k, total);
      active.leaf_accumulate(acc_b.data(), counts.data(), k, total);
      REQUIRE(bit_equal(acc_a, acc_b));
    }
  }
}
