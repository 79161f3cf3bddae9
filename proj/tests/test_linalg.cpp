#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sparsinv/ensembles.hpp"
#include "sparsinv/errors.hpp"
#include "sparsinv/linalg.hpp"
#include "sparsinv/sparse_geometry.hpp"
#include "sparsinv/support_set.hpp"

using namespace sparsinv;

namespace {

Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, std::size_t trial = 0) {
  return sample_matrix({Distribution::Gaussian, rows, cols, Normalization::Raw}, Seed{seed}, trial);
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  }
  return m;
}

Eigen::VectorXd eigen_singular_values(const Matrix& a) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(a)).singularValues();
}

double norm_of(const Matrix& a, const Vector& v) { return norm2(a.apply(v)); }

}  // namespace

TEST_CASE("singular values of small fixed matrices") {
  const SingularSpectrum id = singular_values(Matrix::identity(5));
  REQUIRE(id.values.size() == 5);
  for (double v : id.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

  const SingularSpectrum d = singular_values(Matrix::from_rows({{3, 0}, {0, 1}}));
  CHECK(d.values[0] == doctest::Approx(3.0));
  CHECK(d.values[1] == doctest::Approx(1.0));

  const SingularSpectrum p = singular_values(Matrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(p.values[0] == doctest::Approx(1.0));
  CHECK(p.values[1] == doctest::Approx(1.0));

  const Matrix m = Matrix::from_rows({{-2}});
  CHECK(smallest_singular_value(m) == 2.0);
  CHECK(largest_singular_value(m) == 2.0);
  CHECK(smallest_singular_value(Matrix::identity(7)) == doctest::Approx(1.0));
  CHECK(largest_singular_value(Matrix::identity(7)) == doctest::Approx(1.0));
}

TEST_CASE("spectrum agrees with an independent SVD") {
  const std::size_t shapes[][2] = {{1, 1}, {3, 3}, {8, 5}, {5, 8}, {40, 40}, {60, 25}, {17, 90}};
  std::uint64_t seed = 100;
  for (const auto& shape : shapes) {
    const Matrix a = gaussian(shape[0], shape[1], seed++);
    const SingularSpectrum ours = singular_values(a);
    const Eigen::VectorXd ref = eigen_singular_values(a);
    REQUIRE(ours.values.size() == static_cast<std::size_t>(ref.size()));
    for (std::size_t i = 0; i < ours.values.size(); ++i) {
      CHECK(std::abs(ours.values[i] - ref(static_cast<Eigen::Index>(i))) <= 1e-11 * ref(0));
    }
    CHECK(smallest_singular_value(a) == doctest::Approx(ref(ref.size() - 1)).epsilon(1e-10));
    CHECK(largest_singular_value(a) == doctest::Approx(ref(0)).epsilon(1e-12));
  }
}

TEST_CASE("graded matrix keeps relative accuracy at the bottom") {
  // Columns of an orthogonal matrix scaled by 1, 1e-4, ..., 1e-20.
  const std::size_t n = 6;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = std::pow(10.0, -4.0 * static_cast<double>(i));
  const Eigen::MatrixXd u = Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(gaussian(n, n, 5))).householderQ();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = diag[i];
  const Eigen::MatrixXd m = u * d;
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
  }
  const SingularSpectrum s = singular_values(a);
  for (std::size_t i = 0; i < n; ++i) CHECK(s.values[i] == doctest::Approx(diag[i]).epsilon(1e-9));
}

TEST_CASE("bidiagonal extremes match the full spectrum") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t rows = 2 + seed * 3 % 37;
    const std::size_t cols = 2 + seed * 7 % 29;
    const Matrix a = gaussian(rows, cols, seed);
    const SingularSpectrum s = singular_values(a);
    CHECK(smallest_singular_value(a) == doctest::Approx(s.smallest()).epsilon(1e-10));
    CHECK(largest_singular_value(a) == doctest::Approx(s.largest()).epsilon(1e-12));
  }
}

TEST_CASE("spectrum of the transpose") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix a = gaussian(7 + seed, 12 - seed, seed);
    const SingularSpectrum s = singular_values(a);
    const SingularSpectrum t = singular_values(a.transpose());
    REQUIRE(s.values.size() == t.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) CHECK(std::abs(s.values[i] - t.values[i]) <= 1e-10);
  }
}

TEST_CASE("squared singular values are the Gram eigenvalues") {
  const Matrix a = gaussian(30, 12, 77);
  const Eigen::MatrixXd g = to_eigen(a).transpose() * to_eigen(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const SingularSpectrum s = singular_values(a);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(s.values[i] * s.values[i] == doctest::Approx(es.eigenvalues()(11 - static_cast<Eigen::Index>(i))).epsilon(1e-10));
  }
}

TEST_CASE("variational bounds on random unit vectors") {
  const Matrix a = gaussian(50, 50, 3);
  const double lo = smallest_singular_value(a);
  const double hi = largest_singular_value(a);
  Rng rng = Rng::stream(Seed{3}, 0, StreamTag::Vector);
  for (int i = 0; i < 100; ++i) {
    const Vector v = random_unit_vector(50, rng);
    const double r = norm_of(a, v);
    CHECK(lo <= r * (1 + 1e-12));
    CHECK(r <= hi * (1 + 1e-12));
  }

  // Property run over many shapes.
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::size_t rows = 3 + t % 11;
    const std::size_t cols = 1 + t % rows;
    const Matrix b = gaussian(rows, cols, 900, t);
    const double s_lo = smallest_singular_value(b);
    const double s_hi = largest_singular_value(b);
    Rng r2 = Rng::stream(Seed{900}, t, StreamTag::Vector);
    for (int k = 0; k < 50; ++k) {
      const double r = norm_of(b, random_unit_vector(cols, r2));
      REQUIRE(s_lo <= r * (1 + 1e-12));
      REQUIRE(r <= s_hi * (1 + 1e-12));
    }
  }
}

TEST_CASE("condition numbers") {
  const ConditionReport c = condition_numbers(Matrix::from_rows({{4, 0}, {0, 0.5}}));
  CHECK(c.largest == doctest::Approx(4.0));
  CHECK(c.smallest == doctest::Approx(0.5));
  CHECK(c.ratio == doctest::Approx(8.0));
  CHECK(c.product == doctest::Approx(2.0));
  const ConditionReport z = condition_numbers(Matrix::from_rows({{1, 1}, {1, 1}}));
  CHECK(std::isinf(z.ratio));
}

TEST_CASE("restricted smallest singular value") {
  CHECK(restricted_min_sv(Matrix::identity(4), SupportSet({1, 3}, 4)) == doctest::Approx(1.0));

  Matrix dup = gaussian(5, 3, 1);
  const Vector c0 = dup.column(0);
  Vector u = c0;
  normalize(u);
  dup.set_column(0, u);
  dup.set_column(2, u);
  CHECK(restricted_min_sv(dup, SupportSet({0, 2}, 3)) < 1e-12);
}

TEST_CASE("restricted minimum agrees with a net of the support circle") {
  const Matrix a = gaussian(6, 8, 12);
  SupportSet t = SupportSet::first(2, 8);
  do {
    const std::size_t i = t.indices()[0];
    const std::size_t j = t.indices()[1];
    double best = INFINITY;
    const int steps = 200000;
    for (int k = 0; k < steps; ++k) {
      const double theta = std::numbers::pi * k / steps;
      Vector x(8, 0.0);
      x[i] = std::cos(theta);
      x[j] = std::sin(theta);
      best = std::min(best, norm_of(a, x));
    }
    CHECK(restricted_min_sv(a, t) == doctest::Approx(best).epsilon(1e-3));
  } while (t.next());
}

TEST_CASE("restricted minimum over supports equals the sparse-sphere minimum") {
  // Tiny instances, s = 1 and s = 2: net over each support's unit sphere.
  const Matrix a = gaussian(4, 6, 44);
  for (std::size_t s : {1u, 2u}) {
    double by_support = INFINITY;
    double by_net = INFINITY;
    SupportSet t = SupportSet::first(s, 6);
    do {
      by_support = std::min(by_support, restricted_min_sv(a, t));
      if (s == 1) {
        by_net = std::min(by_net, norm2(a.column(t.indices()[0])));
      } else {
        for (int k = 0; k < 20000; ++k) {
          const double theta = std::numbers::pi * k / 20000;
          Vector x(6, 0.0);
          x[t.indices()[0]] = std::cos(theta);
          x[t.indices()[1]] = std::sin(theta);
          by_net = std::min(by_net, norm_of(a, x));
        }
      }
    } while (t.next());
    CHECK(by_support == doctest::Approx(by_net).epsilon(1e-3));
  }
}

TEST_CASE("distance to a column span") {
  CHECK(distance_to_colspan(Vector{0, 1, 0}, Matrix::from_rows({{1}, {0}, {0}})) == doctest::Approx(1.0));

  const Matrix b = gaussian(20, 6, 8);
  const Vector coeff{1, -2, 0.5, 3, 0, 1};
  CHECK(distance_to_colspan(b.apply(coeff), b) <= 1e-8);

  Rng rng = Rng::stream(Seed{8}, 0, StreamTag::Vector);
  for (int i = 0; i < 20; ++i) {
    const Vector v = random_unit_vector(20, rng);
    const ColspanSplit sp = colspan_split(v, b);
    CHECK(sp.rank == 6);
    // Pythagoras: ||v||^2 = dist^2 + ||P v||^2.
    CHECK(sp.distance * sp.distance + sp.projection_norm * sp.projection_norm == doctest::Approx(1.0).epsilon(1e-12));
    // Independent oracle: least squares through Eigen.
    const Eigen::VectorXd ev = Eigen::Map<const Eigen::VectorXd>(v.data(), 20);
    const Eigen::MatrixXd eb = to_eigen(b);
    const Eigen::VectorXd fit = eb.colPivHouseholderQr().solve(ev);
    CHECK(sp.distance == doctest::Approx((ev - eb * fit).norm()).epsilon(1e-10));
  }
}

TEST_CASE("distance is invariant under a change of basis of the span") {
  for (std::uint64_t t = 0; t < 25; ++t) {
    const Matrix b = gaussian(15, 5, 60, t);
    const Matrix m = gaussian(5, 5, 61, t);
    const Matrix bm = b * m;
    Rng rng = Rng::stream(Seed{62}, t, StreamTag::Vector);
    const Vector v = random_unit_vector(15, rng);
    CHECK(std::abs(distance_to_colspan(v, b) - distance_to_colspan(v, bm)) <= 1e-8);
  }
}

TEST_CASE("projector reuse matches one-shot splits") {
  const Matrix b = gaussian(12, 4, 70);
  const ColspanProjector p(b);
  Rng rng = Rng::stream(Seed{70}, 0, StreamTag::Vector);
  for (int i = 0; i < 10; ++i) {
    const Vector v = random_unit_vector(12, rng);
    CHECK(p.distance(v) == doctest::Approx(distance_to_colspan(v, b)).epsilon(1e-14));
  }
}

TEST_CASE("unit normal of a hyperplane") {
  const Vector a = unit_normal(Matrix::from_rows({{1, 0}, {0, 1}, {0, 0}}));
  CHECK(a[0] == doctest::Approx(0.0));
  CHECK(a[1] == doctest::Approx(0.0));
  CHECK(a[2] == doctest::Approx(1.0));

  const std::size_t n = 20;
  for (auto check : {RankCheck::Exact, RankCheck::Estimate}) {
    const Matrix b = gaussian(n, n - 1, 21);
    const Vector normal = unit_normal(b, check);
    CHECK(norm2(normal) == doctest::Approx(1.0).epsilon(1e-14));
    const Vector bt = b.apply_transpose(normal);
    CHECK(norm_inf(bt) <= 1e-10);
    Rng rng = Rng::stream(Seed{21}, 0, StreamTag::Vector);
    for (int i = 0; i < 20; ++i) {
      const Vector v = random_unit_vector(n, rng);
      CHECK(std::abs(std::abs(dot(normal, v)) - distance_to_colspan(v, b)) <= 1e-8);
    }
  }

  Matrix dup = gaussian(4, 3, 22);
  dup.set_column(2, dup.column(0));
  CHECK_THROWS_AS(unit_normal(dup), RankError);
  CHECK_THROWS_AS(unit_normal(dup, RankCheck::Estimate), RankError);
  CHECK_THROWS_AS(unit_normal(gaussian(4, 2, 23)), DimensionError);
}

TEST_CASE("least squares") {
  const Matrix a = gaussian(10, 4, 30);
  const Vector x{1, 2, -1, 0.25};
  const Vector sol = least_squares(a, a.apply(x));
  for (std::size_t i = 0; i < 4; ++i) CHECK(sol[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("bad inputs are rejected") {
  CHECK_THROWS_AS(singular_values(Matrix()), DimensionError);
  Matrix nan = Matrix::identity(2);
  nan(0, 1) = std::nan("");
  CHECK_THROWS_AS(smallest_singular_value(nan), NonFiniteError);
  CHECK_THROWS_AS(restricted_min_sv(Matrix::identity(3), SupportSet({0, 1}, 4)), DomainError);
}
