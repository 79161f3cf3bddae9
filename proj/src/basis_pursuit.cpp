#include "sparsinv/basis_pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsinv/errors.hpp"
#include "sparsinv/linalg.hpp"

namespace sparsinv {

namespace {

constexpr double kStepFraction = 0.99;
// Coordinates above this fraction of max |x_i| form the polish support.
constexpr double kPolishThreshold = 1e-6;

// Dense Cholesky of a small SPD matrix, retried with a growing ridge when a
// pivot is not positive (rank-deficient A, or late IPM iterations).
class Cholesky {
 public:
  explicit Cholesky(std::vector<double> m, std::size_t n) : n_(n), l_(std::move(m)) {
    double trace = 0.0;
    for (std::size_t i = 0; i < n_; ++i) trace += l_[i * n_ + i];
    const std::vector<double> original = l_;
    double ridge = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
      if (factor()) return;
      ridge = ridge == 0.0 ? 1e-14 * std::max(trace / static_cast<double>(n_), 1e-300) : ridge * 10.0;
      l_ = original;
      for (std::size_t i = 0; i < n_; ++i) l_[i * n_ + i] += ridge;
    }
    throw RankError("normal equations could not be factored");
  }

  void solve(std::span<double> b) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double v = b[i];
      for (std::size_t k = 0; k < i; ++k) v -= l_[i * n_ + k] * b[k];
      b[i] = v / l_[i * n_ + i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      double v = b[i];
      for (std::size_t k = i + 1; k < n_; ++k) v -= l_[k * n_ + i] * b[k];
      b[i] = v / l_[i * n_ + i];
    }
  }

 private:
  bool factor() {
    for (std::size_t j = 0; j < n_; ++j) {
      double d = l_[j * n_ + j];
      for (std::size_t k = 0; k < j; ++k) d -= l_[j * n_ + k] * l_[j * n_ + k];
      if (!(d > 0.0) || !std::isfinite(d)) return false;
      d = std::sqrt(d);
      l_[j * n_ + j] = d;
      for (std::size_t i = j + 1; i < n_; ++i) {
        double v = l_[i * n_ + j];
        for (std::size_t k = 0; k < j; ++k) v -= l_[i * n_ + k] * l_[j * n_ + k];
        l_[i * n_ + j] = v / d;
      }
    }
    return true;
  }

  std::size_t n_;
  std::vector<double> l_;
};

// A diag(w) A^T, row-major n x n.
std::vector<double> weighted_gram(const Matrix& a, std::span<const double> w) {
  const std::size_t n = a.rows(), cols = a.cols();
  std::vector<double> m(n * n, 0.0);
  std::vector<double> scaled(cols);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < cols; ++k) scaled[k] = a(i, k) * w[k];
    for (std::size_t j = 0; j <= i; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < cols; ++k) v += scaled[k] * a(j, k);
      m[i * n + j] = m[j * n + i] = v;
    }
  }
  return m;
}

double max_step(std::span<const double> v, std::span<const double> dv) noexcept {
  double alpha = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

struct Certificate {
  Vector dual;
  double primal = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double residual = 0.0;
};

Certificate certify(const Matrix& a, std::span<const double> y, std::span<const double> x,
                    std::span<const double> lambda) {
  Certificate c;
  const double inf = norm_inf(a.apply_transpose(lambda));
  const double scale = std::max(1.0, inf);
  c.dual.assign(lambda.begin(), lambda.end());
  for (double& v : c.dual) v /= scale;
  c.primal = norm1(x);
  c.dual_objective = dot(y, c.dual);
  c.gap = c.primal - c.dual_objective;
  Vector r = a.apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  c.residual = norm2(r);
  return c;
}

}  // namespace

BasisPursuitResult basis_pursuit(const Matrix& a, std::span<const double> y, double tol, int max_iterations) {
  if (a.empty()) throw DimensionError("matrix must be nonempty");
  if (y.size() != a.rows()) throw DimensionError("y length != rows of A");
  if (!a.all_finite()) throw NonFiniteError("matrix has non-finite entries");
  for (double v : y) {
    if (!std::isfinite(v)) throw NonFiniteError("y has non-finite entries");
  }
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

  const std::size_t n = a.rows();
  const std::size_t cols = a.cols();
  BasisPursuitResult result;
  const double ynorm = norm2(y);
  if (ynorm == 0.0) {
    result.x.assign(cols, 0.0);
    result.dual.assign(n, 0.0);
    return result;
  }
  const double feas_tol = tol * std::max(1.0, ynorm);
  if (distance_to_colspan(y, a) > feas_tol) throw InfeasibleError("y is not in the range of A");

  // z = (u, v), s = slacks of the dual constraints +-A^T lambda <= 1.
  const std::size_t m2 = 2 * cols;
  Vector z(m2), s(m2, 1.0), lambda(n, 0.0);
  {
    const Cholesky gram(weighted_gram(a, Vector(cols, 2.0)), n);
    Vector w(y.begin(), y.end());
    gram.solve(w);
    const Vector x0 = a.apply_transpose(w);
    for (std::size_t k = 0; k < cols; ++k) {
      z[k] = x0[k];
      z[cols + k] = -x0[k];
    }
    const double shift = std::max(0.0, -1.5 * *std::min_element(z.begin(), z.end()));
    for (double& v : z) v += shift;
    const double zs = dot(z, s);
    double sum_z = 0.0, sum_s = 0.0;
    for (std::size_t i = 0; i < m2; ++i) {
      sum_z += z[i];
      sum_s += s[i];
    }
    const double dz = 0.5 * zs / sum_s;
    const double ds = sum_z > 0.0 ? 0.5 * zs / sum_z : 1.0;
    for (double& v : z) v += dz;
    for (double& v : s) v += ds;
  }

  auto primal_x = [&] {
    Vector x(cols);
    for (std::size_t k = 0; k < cols; ++k) x[k] = z[k] - z[cols + k];
    return x;
  };
  auto accepted = [&](const Certificate& c) {
    return c.residual <= feas_tol && c.gap <= tol * std::max(1.0, c.primal);
  };

  Vector best_x = primal_x();
  double best_merit = std::numeric_limits<double>::infinity();
  Vector rp(n), rd(m2), d(m2), dz(m2), ds(m2), dlambda(n), rc(m2), dz_aff(m2), ds_aff(m2);

  // Newton direction for complementarity right-hand side rc.
  auto direction = [&](const Cholesky& chol, std::span<const double> rc_in) {
    Vector q(m2);
    for (std::size_t i = 0; i < m2; ++i) q[i] = -rc_in[i] / s[i] + d[i] * rd[i];
    Vector qx(cols);
    for (std::size_t k = 0; k < cols; ++k) qx[k] = q[k] - q[cols + k];
    const Vector aq = a.apply(qx);
    for (std::size_t i = 0; i < n; ++i) dlambda[i] = rp[i] + aq[i];
    chol.solve(dlambda);
    const Vector atl = a.apply_transpose(dlambda);
    for (std::size_t k = 0; k < cols; ++k) {
      ds[k] = rd[k] - atl[k];
      ds[cols + k] = rd[cols + k] + atl[k];
    }
    for (std::size_t i = 0; i < m2; ++i) dz[i] = (rc_in[i] - z[i] * ds[i]) / s[i];
  };

  for (int it = 0; it <= max_iterations; ++it) {
    const Vector x = primal_x();
    const Certificate cert = certify(a, y, x, lambda);
    const double merit = cert.residual / std::max(1.0, ynorm) + std::abs(cert.gap) / std::max(1.0, cert.primal);
    if (merit < best_merit) {
      best_merit = merit;
      best_x = x;
    }
    if (accepted(cert)) {
      result.x = x;
      result.dual = cert.dual;
      result.primal = cert.primal;
      result.dual_objective = cert.dual_objective;
      result.gap = cert.gap;
      result.residual = cert.residual;
      result.iterations = it;
      break;
    }
    if (it == max_iterations) {
      throw ConvergenceError("basis pursuit did not reach tolerance within " + std::to_string(max_iterations) +
                                 " iterations",
                             best_x);
    }

    const Vector ax = a.apply(x);
    for (std::size_t i = 0; i < n; ++i) rp[i] = y[i] - ax[i];
    const Vector atl = a.apply_transpose(lambda);
    for (std::size_t k = 0; k < cols; ++k) {
      rd[k] = 1.0 - atl[k] - s[k];
      rd[cols + k] = 1.0 + atl[k] - s[cols + k];
    }
    const double mu = dot(z, s) / static_cast<double>(m2);
    for (std::size_t i = 0; i < m2; ++i) d[i] = z[i] / s[i];
    Vector w(cols);
    for (std::size_t k = 0; k < cols; ++k) w[k] = d[k] + d[cols + k];
    const Cholesky chol(weighted_gram(a, w), n);

    for (std::size_t i = 0; i < m2; ++i) rc[i] = -z[i] * s[i];
    direction(chol, rc);
    dz_aff = dz;
    ds_aff = ds;
    const double ap_aff = max_step(z, dz_aff);
    const double ad_aff = max_step(s, ds_aff);
    double mu_aff = 0.0;
    for (std::size_t i = 0; i < m2; ++i) mu_aff += (z[i] + ap_aff * dz_aff[i]) * (s[i] + ad_aff * ds_aff[i]);
    mu_aff /= static_cast<double>(m2);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    for (std::size_t i = 0; i < m2; ++i) rc[i] = -z[i] * s[i] - dz_aff[i] * ds_aff[i] + sigma * mu;
    direction(chol, rc);
    const double ap = std::min(1.0, kStepFraction * max_step(z, dz));
    const double ad = std::min(1.0, kStepFraction * max_step(s, ds));
    for (std::size_t i = 0; i < m2; ++i) {
      z[i] += ap * dz[i];
      s[i] += ad * ds[i];
    }
    for (std::size_t i = 0; i < n; ++i) lambda[i] += ad * dlambda[i];
  }

  // Polish on the detected support.
  const double xmax = norm_inf(result.x);
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < cols; ++k) {
    if (std::abs(result.x[k]) > kPolishThreshold * xmax) support.push_back(k);
  }
  if (!support.empty() && support.size() <= n) {
    const Vector coef = least_squares(a.select_columns(support), y);
    Vector x(cols, 0.0);
    for (std::size_t j = 0; j < support.size(); ++j) x[support[j]] = coef[j];
    const Certificate cert = certify(a, y, x, result.dual);
    if (cert.residual <= std::max(result.residual, 1e-3 * feas_tol) &&
        cert.primal <= result.primal + tol * std::max(1.0, result.primal) && accepted(cert)) {
      result.x = x;
      result.primal = cert.primal;
      result.gap = cert.gap;
      result.residual = cert.residual;
      result.polished = true;
    }
  }
  return result;
}

}  // namespace sparsinv
