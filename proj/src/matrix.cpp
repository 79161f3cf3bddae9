#include "sparsinv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "sparsinv/errors.hpp"

namespace sparsinv {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix entry count does not match rows x cols");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged row list");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns) {
  const std::size_t c = columns.size();
  const std::size_t r = c == 0 ? 0 : columns.front().size();
  Matrix m(r, c);
  for (std::size_t j = 0; j < c; ++j) {
    if (columns[j].size() != r) throw DimensionError("ragged column list");
    m.set_column(j, columns[j]);
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
  if (values.size() != rows_) throw DimensionError("column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> indices) const {
  Matrix m(rows_, indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= cols_) throw DomainError("column index out of range");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* src = data_.data() + i * cols_;
    double* dst = m.data_.data() + i * indices.size();
    for (std::size_t k = 0; k < indices.size(); ++k) dst[k] = src[indices[k]];
  }
  return m;
}

Matrix Matrix::drop_column(std::size_t j) const {
  if (j >= cols_) throw DomainError("column index out of range");
  Matrix m(rows_, cols_ - 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* src = data_.data() + i * cols_;
    double* dst = m.data_.data() + i * (cols_ - 1);
    std::memcpy(dst, src, j * sizeof(double));
    std::memcpy(dst + j, src + j + 1, (cols_ - j - 1) * sizeof(double));
  }
  return m;
}

Vector Matrix::apply(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("apply: vector length != cols");
  Vector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    y[i] = dot(std::span<const double>(data_.data() + i * cols_, cols_), x);
  }
  return y;
}

Vector Matrix::apply_transpose(std::span<const double> y) const {
  if (y.size() != rows_) throw DimensionError("apply_transpose: vector length != rows");
  Vector x(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double yi = y[i];
    const double* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) x[j] += row[j] * yi;
  }
  return x;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionError("matrix product: inner dimensions differ");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    double* dst = out.data_.data() + i * rhs.cols_;
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      const double* src = rhs.data_.data() + k * rhs.cols_;
      for (std::size_t j = 0; j < rhs.cols_; ++j) dst[j] += a * src[j];
    }
  }
  return out;
}

Matrix& Matrix::operator*=(double scale) noexcept {
  for (double& v : data_) v *= scale;
  return *this;
}

bool Matrix::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::uint64_t Matrix::checksum() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dims[2] = {rows_, cols_};
  feed(dims, sizeof(dims));
  feed(data_.data(), data_.size() * sizeof(double));
  return h;
}

std::string Matrix::checksum_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(checksum()));
  return buf;
}

// Four independent partial sums: keeps the summation order fixed (so results
// do not depend on compiler flags) while still letting the loop vectorize.
double dot(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = a.size();
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double norm2(std::span<const double> x) noexcept {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  // Plain sum of squares is safe for the magnitudes this library produces.
  if (scale > 1e-150 && scale < 1e150) return std::sqrt(dot(x, x));
  double sum = 0.0;
  for (double v : x) {
    const double r = v / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

double norm1(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double norm_inf(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

double normalize(std::span<double> x) noexcept {
  const double n = norm2(x);
  if (n > 0.0) {
    for (double& v : x) v /= n;
  }
  return n;
}

}  // namespace sparsinv
