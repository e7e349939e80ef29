#pragma once

#include <cassert>
#include <cstddef>
#include <string>
#include <vector>

#include "cliquesel/errors.hpp"

namespace cliquesel {

// Row-major dense matrix of doubles. Small and boring on purpose: the
// learning code owns all the numerics, this only owns the storage.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  double* row_ptr(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row_ptr(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }

  void require_shape(int r, int c, const char* what) const {
    if (rows != r || cols != c)
      throw ShapeMismatch(std::string(what) + ": expected " + std::to_string(r) + "x" +
                          std::to_string(c) + ", got " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
};

// out = a * b, shapes (m x k) * (k x n).
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) throw ShapeMismatch("matmul: inner dimensions disagree");
  DenseMatrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.row_ptr(i);
    double* orow = out.row_ptr(i);
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row_ptr(k);
      for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

}  // namespace cliquesel
