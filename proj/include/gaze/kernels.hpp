#pragma once

#include <cstddef>
#include <cstdint>

namespace gaze::kernels {

// Arithmetic inner loops of the pipeline, as swappable kernels: a scalar
// reference implementation plus an AVX2 variant picked at runtime on x86-64.
// Every variant must produce bit-identical output to the scalar reference
// (per-lane operations are the same IEEE ops in the same per-element order),
// which the kernel equivalence tests assert. Anything branchy (tree
// traversal, triangulation) stays out of here.
struct Ops {
  const char* name;

  // out[2i]   = (xy[2i]   - center_x) / width
  // out[2i+1] = (xy[2i+1] - center_y) / height   for i in [0, n_points)
  void (*normalize_points)(const double* xy, std::size_t n_points,
                           double center_x, double center_y, double width,
                           double height, double* out);

  // Componentwise min/max over interleaved (x, y) pairs. n_points >= 1.
  void (*minmax_xy)(const double* xy, std::size_t n_points, double* min_x,
                    double* min_y, double* max_x, double* max_y);

  // acc[i] += x[i]
  void (*vec_accumulate)(double* acc, const double* x, std::size_t n);

  // x[i] *= s
  void (*vec_scale)(double* x, std::size_t n, double s);

  // acc[c] += counts[c] / total   (leaf class-count fractions)
  void (*leaf_accumulate)(double* acc, const std::uint32_t* counts,
                          std::size_t n_classes, double total);
};

const Ops& scalar_ops();

// Best variant for this machine, detected once.
const Ops& active_ops();

bool avx2_supported();

}  // namespace gaze::kernels
