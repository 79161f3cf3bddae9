#include "sparsinv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparsinv/errors.hpp"
#include "sparsinv/support_set.hpp"

namespace sparsinv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_usable(const Matrix& a) {
  if (a.empty()) throw DimensionError("matrix must be nonempty");
  if (!a.all_finite()) throw NonFiniteError("matrix has non-finite entries");
}

// w <- w - scale * v over a contiguous range.
inline void axpy(double scale, const double* v, double* w, std::size_t len) noexcept {
  for (std::size_t i = 0; i < len; ++i) w[i] -= scale * v[i];
}

// Cyclic one-sided Jacobi on the columns of the column-major m x n array w.
// Returns the final column norms (unsorted).
std::vector<double> jacobi_column_norms(std::vector<double>& w, std::size_t m, std::size_t n,
                                        int max_sweeps) {
  std::vector<double> sq(n);
  auto col = [&](std::size_t j) { return std::span<double>(w.data() + j * m, m); };
  const double tol = std::sqrt(static_cast<double>(m)) * kEps;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < n; ++j) sq[j] = dot(col(j), col(j));
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double a = sq[p];
        const double b = sq[q];
        if (a == 0.0 || b == 0.0) continue;
        const auto cp = col(p);
        const auto cq = col(q);
        const double g = dot(cp, cq);
        if (std::abs(g) <= tol * std::sqrt(a) * std::sqrt(b)) continue;
        rotated = true;
        const double zeta = (b - a) / (2.0 * g);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        double* xp = cp.data();
        double* xq = cq.data();
        for (std::size_t i = 0; i < m; ++i) {
          const double x = xp[i];
          const double y = xq[i];
          xp[i] = c * x - s * y;
          xq[i] = s * x + c * y;
        }
        sq[p] = a - t * g;
        sq[q] = b + t * g;
      }
    }
    if (!rotated) break;
  }
  if (sweep == max_sweeps) throw ConvergenceError("one-sided Jacobi did not converge", {});

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = norm2(col(j));
  return norms;
}

SingularSpectrum spectrum_of_triangular(const HouseholderQr& qr, std::size_t k, int max_sweeps) {
  std::vector<double> w = qr.leading_r_transposed(k);
  SingularSpectrum s;
  s.values = jacobi_column_norms(w, k, k, max_sweeps);
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

// Upper-triangular solves on the leading k x k block of R.
void solve_r(const HouseholderQr& qr, std::size_t k, std::span<double> x) {
  for (std::size_t ii = k; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t j = ii + 1; j < k; ++j) s -= qr.r(ii, j) * x[j];
    x[ii] = s / qr.r_diagonal(ii);
  }
}

void solve_r_transpose(const HouseholderQr& qr, std::size_t k, std::span<double> x) {
  for (std::size_t i = 0; i < k; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= qr.r(j, i) * x[j];
    x[i] = s / qr.r_diagonal(i);
  }
}

struct ExtremeEstimate {
  double largest = 0.0;
  double smallest = 0.0;
};

// Power iteration for s_max and inverse iteration for s_min of the leading
// k x k triangular block. The s_min value is always >= the true s_min.
ExtremeEstimate estimate_extremes(const HouseholderQr& qr, std::size_t k) {
  constexpr int kIterations = 24;
  ExtremeEstimate e;
  for (std::size_t i = 0; i < k; ++i) {
    if (qr.r_diagonal(i) == 0.0) return e;
  }
  Vector start(k);
  for (std::size_t i = 0; i < k; ++i) start[i] = 1.0 + static_cast<double>(i % 7) / 7.0;
  normalize(start);

  Vector x = start;
  Vector y(k);
  for (int it = 0; it < kIterations; ++it) {
    // y = R x, x = R^T y
    for (std::size_t i = 0; i < k; ++i) {
      double s = 0.0;
      for (std::size_t j = i; j < k; ++j) s += qr.r(i, j) * x[j];
      y[i] = s;
    }
    e.largest = std::max(e.largest, norm2(y));
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) x[j] += qr.r(i, j) * y[i];
    }
    if (normalize(x) == 0.0) break;
  }

  x = start;
  e.smallest = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kIterations; ++it) {
    solve_r_transpose(qr, k, x);
    const double growth = norm2(x);
    if (!std::isfinite(growth)) {
      e.smallest = 0.0;
      break;
    }
    e.smallest = std::min(e.smallest, 1.0 / growth);
    solve_r(qr, k, x);
    if (!std::isfinite(norm2(x))) {
      e.smallest = 0.0;
      break;
    }
    normalize(x);
  }
  return e;
}

}  // namespace

HouseholderQr::HouseholderQr(const Matrix& a, Pivoting pivoting)
    : m_(a.rows()), n_(a.cols()), qr_(a.rows() * a.cols()), perm_(a.cols()) {
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) qr_[j * m_ + i] = a(i, j);
  }
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const std::size_t kmax = std::min(m_, n_);
  tau_.assign(kmax, 0.0);
  auto col = [this](std::size_t j) { return qr_.data() + j * m_; };

  const bool pivot = pivoting == Pivoting::Column;
  std::vector<double> vn1, vn2;
  if (pivot) {
    vn1.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) vn1[j] = norm2(std::span<const double>(col(j), m_));
    vn2 = vn1;
  }
  const double tol3z = std::sqrt(kEps);

  for (std::size_t k = 0; k < kmax; ++k) {
    if (pivot) {
      std::size_t p = k;
      for (std::size_t j = k + 1; j < n_; ++j) {
        if (vn1[j] > vn1[p]) p = j;
      }
      if (p != k) {
        std::swap_ranges(col(k), col(k) + m_, col(p));
        std::swap(perm_[k], perm_[p]);
        std::swap(vn1[k], vn1[p]);
        std::swap(vn2[k], vn2[p]);
      }
    }

    double* v = col(k);
    const double alpha = v[k];
    const double xnorm = norm2(std::span<const double>(v + k + 1, m_ - k - 1));
    if (xnorm != 0.0) {
      const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
      tau_[k] = (beta - alpha) / beta;
      const double scale = 1.0 / (alpha - beta);
      for (std::size_t i = k + 1; i < m_; ++i) v[i] *= scale;
      v[k] = beta;

      const std::size_t len = m_ - k - 1;
      for (std::size_t j = k + 1; j < n_; ++j) {
        double* c = col(j);
        double w = c[k] + dot(std::span<const double>(v + k + 1, len),
                              std::span<const double>(c + k + 1, len));
        w *= tau_[k];
        c[k] -= w;
        axpy(w, v + k + 1, c + k + 1, len);
      }
    }

    if (pivot) {
      for (std::size_t j = k + 1; j < n_; ++j) {
        if (vn1[j] == 0.0) continue;
        const double ratio = std::abs(col(j)[k]) / vn1[j];
        const double temp = std::max(0.0, 1.0 - ratio * ratio);
        const double temp2 = temp * (vn1[j] / vn2[j]) * (vn1[j] / vn2[j]);
        if (temp2 <= tol3z) {
          vn1[j] = norm2(std::span<const double>(col(j) + k + 1, m_ - k - 1));
          vn2[j] = vn1[j];
        } else {
          vn1[j] *= std::sqrt(temp);
        }
      }
    }
  }
}

std::size_t HouseholderQr::rank(double relative_tolerance) const noexcept {
  const std::size_t kmax = std::min(m_, n_);
  if (kmax == 0) return 0;
  const double r00 = std::abs(r_diagonal(0));
  if (r00 == 0.0) return 0;
  std::size_t r = 0;
  while (r < kmax && std::abs(r_diagonal(r)) > relative_tolerance * r00) ++r;
  return r;
}

void HouseholderQr::apply_qt(std::span<double> v) const {
  if (v.size() != m_) throw DimensionError("apply_qt: vector length != rows");
  for (std::size_t k = 0; k < tau_.size(); ++k) {
    if (tau_[k] == 0.0) continue;
    const double* h = qr_.data() + k * m_;
    const std::size_t len = m_ - k - 1;
    double w = v[k] + dot(std::span<const double>(h + k + 1, len), v.subspan(k + 1, len));
    w *= tau_[k];
    v[k] -= w;
    axpy(w, h + k + 1, v.data() + k + 1, len);
  }
}

void HouseholderQr::apply_q(std::span<double> v) const {
  if (v.size() != m_) throw DimensionError("apply_q: vector length != rows");
  for (std::size_t k = tau_.size(); k-- > 0;) {
    if (tau_[k] == 0.0) continue;
    const double* h = qr_.data() + k * m_;
    const std::size_t len = m_ - k - 1;
    double w = v[k] + dot(std::span<const double>(h + k + 1, len), v.subspan(k + 1, len));
    w *= tau_[k];
    v[k] -= w;
    axpy(w, h + k + 1, v.data() + k + 1, len);
  }
}

Vector HouseholderQr::q_column(std::size_t k) const {
  Vector e(m_, 0.0);
  e.at(k) = 1.0;
  apply_q(e);
  return e;
}

std::vector<double> HouseholderQr::leading_r_transposed(std::size_t k) const {
  std::vector<double> w(k * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = j; i < k; ++i) w[j * k + i] = r(j, i);
  }
  return w;
}

SingularSpectrum singular_values(const Matrix& a, int max_sweeps) {
  require_usable(a);
  const Matrix& tall = a.rows() >= a.cols() ? a : a.transpose();
  const HouseholderQr qr(tall, HouseholderQr::Pivoting::Column);
  return spectrum_of_triangular(qr, tall.cols(), max_sweeps);
}

namespace {

// Upper bidiagonal form B = U^T A V of a tall matrix: diagonal d, superdiagonal e.
struct Bidiagonal {
  std::vector<double> d;
  std::vector<double> e;
};

// Reflector H = I - tau v v^T with v[0] = 1 mapping x to (beta, 0, ..., 0).
// On return x holds v; the return value is beta.
double make_reflector(double* x, std::size_t len, double& tau) noexcept {
  const double alpha = x[0];
  double sigma = 0.0;
  for (std::size_t i = 1; i < len; ++i) sigma = std::hypot(sigma, x[i]);
  if (sigma == 0.0) {
    tau = 0.0;
    return alpha;
  }
  const double beta = -std::copysign(std::hypot(alpha, sigma), alpha);
  tau = (beta - alpha) / beta;
  const double scale = 1.0 / (alpha - beta);
  for (std::size_t i = 1; i < len; ++i) x[i] *= scale;
  x[0] = 1.0;
  return beta;
}

Bidiagonal bidiagonalize(const Matrix& a) {
  const bool wide = a.rows() < a.cols();
  const std::size_t m = wide ? a.cols() : a.rows();
  const std::size_t n = wide ? a.rows() : a.cols();
  // Column-major copy of the tall orientation.
  std::vector<double> w(m * n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (wide) {
        w[i * m + j] = a(i, j);
      } else {
        w[j * m + i] = a(i, j);
      }
    }
  }
  Bidiagonal b;
  b.d.resize(n);
  b.e.resize(n > 0 ? n - 1 : 0);
  std::vector<double> v(n), work(m);
  for (std::size_t k = 0; k < n; ++k) {
    double* col = w.data() + k * m + k;
    double tau = 0.0;
    b.d[k] = make_reflector(col, m - k, tau);
    if (tau != 0.0) {
      for (std::size_t j = k + 1; j < n; ++j) {
        double* cj = w.data() + j * m + k;
        const double s = tau * dot(std::span<const double>(col, m - k), std::span<const double>(cj, m - k));
        axpy(s, col, cj, m - k);
      }
    }
    if (k + 1 >= n) continue;
    // Right reflector on row k, columns k+1..n-1.
    const std::size_t len = n - k - 1;
    for (std::size_t j = 0; j < len; ++j) v[j] = w[(k + 1 + j) * m + k];
    b.e[k] = make_reflector(v.data(), len, tau);
    if (tau == 0.0) continue;
    const std::size_t rows = m - k - 1;
    std::fill(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(rows), 0.0);
    for (std::size_t j = 0; j < len; ++j) axpy(-v[j], w.data() + (k + 1 + j) * m + k + 1, work.data(), rows);
    for (std::size_t j = 0; j < len; ++j) axpy(tau * v[j], work.data(), w.data() + (k + 1 + j) * m + k + 1, rows);
  }
  return b;
}

// Number of singular values of B below x > 0, from a Sturm count on the
// zero-diagonal tridiagonal with off-diagonal (d0, e0, d1, e1, ..., d_{n-1}),
// whose eigenvalues are +-sigma_i.
std::size_t count_below(const Bidiagonal& b, double x, double pivmin) noexcept {
  const std::size_t n = b.d.size();
  std::size_t negative = 0;
  double q = -x;
  if (std::abs(q) < pivmin) q = -pivmin;
  negative += q < 0.0;
  for (std::size_t i = 1; i < 2 * n; ++i) {
    const double off = (i % 2 == 1) ? b.d[i / 2] : b.e[i / 2 - 1];
    q = -x - off * off / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    negative += q < 0.0;
  }
  return negative - n;
}

// The `rank`-th smallest singular value (1-based) by bisection.
double bisect_singular_value(const Bidiagonal& b, std::size_t rank) {
  if (std::all_of(b.e.begin(), b.e.end(), [](double x) { return x == 0.0; })) {
    std::vector<double> mags(b.d.size());
    std::transform(b.d.begin(), b.d.end(), mags.begin(), [](double x) { return std::abs(x); });
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(rank - 1), mags.end());
    return mags[rank - 1];
  }
  double bound = 0.0;
  double biggest = 0.0;
  const std::size_t n = b.d.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? std::abs(b.e[i - 1]) : 0.0;
    const double right = i + 1 < n ? std::abs(b.e[i]) : 0.0;
    bound = std::max({bound, std::abs(b.d[i]) + left, std::abs(b.d[i]) + right});
    biggest = std::max({biggest, std::abs(b.d[i]), left});
  }
  if (bound == 0.0) return 0.0;
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, biggest * biggest);
  double lo = 0.0;
  double hi = bound * (1.0 + 4.0 * kEps);
  for (int it = 0; it < 2200 && hi - lo > 2.0 * kEps * hi && hi > std::numeric_limits<double>::min(); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(b, mid, pivmin) >= rank) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double smallest_singular_value(const Matrix& a) {
  require_usable(a);
  const Bidiagonal b = bidiagonalize(a);
  return bisect_singular_value(b, 1);
}

double largest_singular_value(const Matrix& a) {
  require_usable(a);
  const Bidiagonal b = bidiagonalize(a);
  return bisect_singular_value(b, b.d.size());
}

ConditionReport condition_numbers(const Matrix& a) {
  const SingularSpectrum s = singular_values(a);
  ConditionReport c;
  c.largest = s.largest();
  c.smallest = s.smallest();
  c.ratio = c.smallest > 0.0 ? c.largest / c.smallest : std::numeric_limits<double>::infinity();
  c.product = c.largest * c.smallest;
  return c;
}

double restricted_min_sv(const Matrix& a, const SupportSet& support) {
  if (support.empty()) throw DomainError("support must be nonempty");
  if (support.ambient() != a.cols()) throw DimensionError("support ambient dimension != cols");
  if (support.size() > a.rows()) throw DomainError("support larger than the number of rows");
  return smallest_singular_value(a.select_columns(support.indices()));
}

ColspanProjector::ColspanProjector(const Matrix& b, double rank_tolerance)
    : qr_(b, HouseholderQr::Pivoting::Column) {
  if (!b.all_finite()) throw NonFiniteError("matrix has non-finite entries");
  rank_ = qr_.rank(rank_tolerance);
}

ColspanSplit ColspanProjector::split(std::span<const double> v) const {
  if (v.size() != qr_.rows()) throw DimensionError("vector length != rows of B");
  Vector w(v.begin(), v.end());
  qr_.apply_qt(w);
  ColspanSplit out;
  out.rank = rank_;
  out.projection_norm = norm2(std::span<const double>(w).first(rank_));
  out.distance = norm2(std::span<const double>(w).subspan(rank_));
  return out;
}

ColspanSplit colspan_split(std::span<const double> v, const Matrix& b, double rank_tolerance) {
  if (v.size() != b.rows()) throw DimensionError("vector length != rows of B");
  if (b.cols() == 0) return {norm2(v), 0.0, 0};
  return ColspanProjector(b, rank_tolerance).split(v);
}

double distance_to_colspan(std::span<const double> v, const Matrix& b, double rank_tolerance) {
  return colspan_split(v, b, rank_tolerance).distance;
}

Vector unit_normal(const Matrix& b, RankCheck check, double rank_tolerance) {
  const std::size_t n = b.rows();
  if (n < 2 || b.cols() + 1 != n) throw DimensionError("unit_normal needs an N x (N-1) matrix, N >= 2");
  require_usable(b);
  const HouseholderQr qr(b, HouseholderQr::Pivoting::Column);
  const std::size_t k = n - 1;

  double s_max = 0.0;
  double s_min = 0.0;
  if (check == RankCheck::Exact) {
    const SingularSpectrum s = spectrum_of_triangular(qr, k, kJacobiMaxSweeps);
    s_max = s.largest();
    s_min = s.smallest();
  } else {
    const ExtremeEstimate e = estimate_extremes(qr, k);
    s_max = e.largest;
    s_min = e.smallest;
  }
  if (!(s_min > rank_tolerance * s_max)) {
    throw RankError("hyperplane basis is rank-deficient (s_min <= tol * s_max)");
  }

  Vector a = qr.q_column(k);
  normalize(a);
  for (double v : a) {
    if (std::abs(v) > 1e-12) {
      if (v < 0.0) {
        for (double& x : a) x = -x;
      }
      break;
    }
  }
  return a;
}

Vector least_squares(const Matrix& a, std::span<const double> y, double rank_tolerance) {
  if (y.size() != a.rows()) throw DimensionError("least_squares: rhs length != rows");
  require_usable(a);
  const HouseholderQr qr(a, HouseholderQr::Pivoting::Column);
  const std::size_t r = qr.rank(rank_tolerance);
  Vector z(y.begin(), y.end());
  qr.apply_qt(z);
  solve_r(qr, r, z);
  Vector x(a.cols(), 0.0);
  for (std::size_t j = 0; j < r; ++j) x[qr.permutation(j)] = z[j];
  return x;
}

}  // namespace sparsinv
