#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gaze {

// Dense row-major sample matrix (rows = samples, cols = features).
struct Matrix {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : data(r * c, 0.0), rows(r), cols(c) {}

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  std::span<const double> row_span(std::size_t r) const {
    return {row(r), cols};
  }

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

}  // namespace gaze
