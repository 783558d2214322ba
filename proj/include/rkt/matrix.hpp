#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rkt/errors.hpp"

namespace rkt {

// Minimal dense row-major matrix; enough for Toeplitz views, bases, and reports.
template <class T>
struct basic_matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  basic_matrix() = default;
  basic_matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T{}) {}

  T& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

using matrix = basic_matrix<double>;
using cmatrix = basic_matrix<std::complex<double>>;

inline matrix identity_matrix(std::size_t n) {
  matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

// Horizontal concatenation [a | b], e.g. to form a two-basis dictionary.
template <class T>
basic_matrix<T> concat_columns(const basic_matrix<T>& a, const basic_matrix<T>& b) {
  if (a.rows != b.rows)
    throw dimension_error("concat_columns: row counts differ (" +
                          std::to_string(a.rows) + " vs " + std::to_string(b.rows) + ")");
  basic_matrix<T> out(a.rows, a.cols + b.cols);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t c = 0; c < a.cols; ++c) out.at(r, c) = a.at(r, c);
    for (std::size_t c = 0; c < b.cols; ++c) out.at(r, a.cols + c) = b.at(r, c);
  }
  return out;
}

}  // namespace rkt
