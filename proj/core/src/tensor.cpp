#include "pairlink/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "pairlink/error.hpp"

namespace pairlink {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string());
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

std::string Matrix::shape_string() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  for (std::size_t k = indptr[r]; k < indptr[r + 1]; ++k) {
    if (indices[k] == c) return values[k];
  }
  return 0.0;
}

Matrix SparseMatrix::to_dense() const {
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = indptr[r]; k < indptr[r + 1]; ++k) out(r, indices[k]) += values[k];
  }
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul shape mismatch " + a.shape_string() + " * " + b.shape_string());
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto orow = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix spmm(const SparseMatrix& s, const Matrix& d) {
  if (s.cols != d.rows()) {
    throw DimensionError("spmm shape mismatch (" + std::to_string(s.rows) + "x" +
                         std::to_string(s.cols) + ") * " + d.shape_string());
  }
  Matrix out(s.rows, d.cols());
  for (std::size_t r = 0; r < s.rows; ++r) {
    auto orow = out.row(r);
    for (std::size_t k = s.indptr[r]; k < s.indptr[r + 1]; ++k) {
      const double w = s.values[k];
      auto drow = d.row(s.indices[k]);
      for (std::size_t j = 0; j < d.cols(); ++j) orow[j] += w * drow[j];
    }
  }
  return out;
}

}  // namespace pairlink
