#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sparsinv {

using Vector = std::vector<double>;

// Dense real matrix, row-major storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_columns(const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const double> entries() const noexcept { return data_; }
  std::span<double> entries() noexcept { return data_; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);
  Matrix transpose() const;
  // Columns in the given order (indices may repeat).
  Matrix select_columns(std::span<const std::size_t> indices) const;
  Matrix drop_column(std::size_t j) const;

  Vector apply(std::span<const double> x) const;             // A x
  Vector apply_transpose(std::span<const double> y) const;   // A^T y
  Matrix operator*(const Matrix& rhs) const;
  Matrix& operator*=(double scale) noexcept;

  bool all_finite() const noexcept;
  // FNV-1a over dimensions and the IEEE-754 bytes of the entries.
  std::uint64_t checksum() const noexcept;
  std::string checksum_hex() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> x) noexcept;
double norm1(std::span<const double> x) noexcept;
double norm_inf(std::span<const double> x) noexcept;
// Scales x to unit Euclidean norm in place; returns the original norm.
double normalize(std::span<double> x) noexcept;

}  // namespace sparsinv
