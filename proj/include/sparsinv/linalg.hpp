#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sparsinv/matrix.hpp"

namespace sparsinv {

class SupportSet;

// Default tolerances. Every function that uses one takes it as a trailing
// parameter so callers (and the CLI configuration) can override it.
inline constexpr double kRankTolerance = 1e-10;         // unit_normal: s_min > tol * s_max
inline constexpr double kColspanRankTolerance = 1e-12;  // pivoted-QR cutoff |R_kk| / |R_00|
inline constexpr int kJacobiMaxSweeps = 60;

// Singular values, nonnegative and sorted descending; length min(rows, cols).
struct SingularSpectrum {
  std::vector<double> values;
  double largest() const noexcept { return values.empty() ? 0.0 : values.front(); }
  double smallest() const noexcept { return values.empty() ? 0.0 : values.back(); }
};

// Householder QR, optionally with column pivoting (A P = Q R).
// Storage is column-major: R on and above the diagonal, reflectors below.
class HouseholderQr {
 public:
  enum class Pivoting { None, Column };

  explicit HouseholderQr(const Matrix& a, Pivoting pivoting = Pivoting::None);

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  // Number of k with |R_kk| > tol * |R_00|. Meaningful with column pivoting.
  std::size_t rank(double relative_tolerance = kColspanRankTolerance) const noexcept;
  double r_diagonal(std::size_t k) const noexcept { return qr_[k * m_ + k]; }
  // R(i, j), i <= j < cols, i < min(rows, cols).
  double r(std::size_t i, std::size_t j) const noexcept { return qr_[j * m_ + i]; }
  // Column of A that ended up in position k.
  std::size_t permutation(std::size_t k) const noexcept { return perm_[k]; }

  void apply_qt(std::span<double> v) const;  // v <- Q^T v
  void apply_q(std::span<double> v) const;   // v <- Q v
  Vector q_column(std::size_t k) const;

  // Upper-triangular factor restricted to its leading k x k block, as the
  // column-major array of its transpose (rows of R become columns).
  std::vector<double> leading_r_transposed(std::size_t k) const;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<double> qr_;
  std::vector<double> tau_;
  std::vector<std::size_t> perm_;
};

// One-sided (Hestenes) Jacobi on the transposed triangular factor of a
// column-pivoted QR. Accurate in the relative sense for the small singular
// values, which is what the experiments measure.
SingularSpectrum singular_values(const Matrix& a, int max_sweeps = kJacobiMaxSweeps);
// Extreme singular values without the full spectrum: Householder
// bidiagonalization, then bisection on a Sturm count of the zero-diagonal
// tridiagonal form. Bisection on the bidiagonal keeps relative accuracy.
double smallest_singular_value(const Matrix& a);
double largest_singular_value(const Matrix& a);

// s_max / s_min and s_max * s_min, both reported.
struct ConditionReport {
  double largest = 0.0;
  double smallest = 0.0;
  double ratio = 0.0;    // infinity when smallest == 0
  double product = 0.0;
};
ConditionReport condition_numbers(const Matrix& a);

// s_min of the column submatrix A_T.
double restricted_min_sv(const Matrix& a, const SupportSet& support);

struct ColspanSplit {
  double distance = 0.0;         // ||v - P_H v||
  double projection_norm = 0.0;  // ||P_H v||
  std::size_t rank = 0;
};

// Orthogonal projector onto the column span of B, factored once and reused.
class ColspanProjector {
 public:
  explicit ColspanProjector(const Matrix& b, double rank_tolerance = kColspanRankTolerance);
  ColspanSplit split(std::span<const double> v) const;
  double distance(std::span<const double> v) const { return split(v).distance; }
  std::size_t rank() const noexcept { return rank_; }

 private:
  HouseholderQr qr_;
  std::size_t rank_ = 0;
};

ColspanSplit colspan_split(std::span<const double> v, const Matrix& b,
                           double rank_tolerance = kColspanRankTolerance);
double distance_to_colspan(std::span<const double> v, const Matrix& b,
                           double rank_tolerance = kColspanRankTolerance);

// How unit_normal certifies that B has rank N-1.
//   Exact     full Jacobi spectrum of the triangular factor
//   Estimate  power / inverse iteration on the triangular factor, O(N^2) per
//             step. The s_min estimate is an upper bound that collapses in one
//             or two steps when B is near rank-deficient.
enum class RankCheck { Exact, Estimate };

// Unit normal a of the hyperplane spanned by the N-1 columns of B.
// Sign convention: the first coordinate with |a_i| > 1e-12 is positive.
// Throws RankError when s_min(B) <= tol * s_max(B).
Vector unit_normal(const Matrix& b, RankCheck check = RankCheck::Exact,
                   double rank_tolerance = kRankTolerance);

// Basic least-squares solution of min ||A x - y|| via pivoted QR; columns
// beyond the numerical rank get zero coefficients.
Vector least_squares(const Matrix& a, std::span<const double> y,
                     double rank_tolerance = kColspanRankTolerance);

}  // namespace sparsinv
