#include <cmath>

#include "doctest.h"
#include "sparsinv/errors.hpp"
#include "sparsinv/recovery.hpp"

using namespace sparsinv;

namespace {

const EnsembleSpec kScaledGaussian{Distribution::Gaussian, 0, 0, Normalization::ScaledByInvSqrtRows};

}  // namespace

TEST_CASE("sparse signals") {
  for (std::size_t t = 0; t < 50; ++t) {
    const Vector x = random_sparse_signal(30, 5, Seed{1}, t);
    std::size_t nz = 0;
    for (double v : x) nz += v != 0.0;
    CHECK(nz == 5);
    CHECK(x == random_sparse_signal(30, 5, Seed{1}, t));
  }
  CHECK(norm2(random_sparse_signal(10, 0, Seed{1}, 0)) == 0.0);
  CHECK_THROWS_AS(random_sparse_signal(3, 4, Seed{1}, 0), DomainError);
}

TEST_CASE("zero sparsity always succeeds") {
  const RecoveryReport r = recovery_experiment(kScaledGaussian, 10, 20, 0, 25, Seed{1});
  CHECK(r.success_fraction() == 1.0);
  for (const auto& rec : r.records) CHECK(rec.rel_error == 0.0);
}

TEST_CASE("recovery regimes at small size") {
  const RecoveryReport easy = recovery_experiment(kScaledGaussian, 32, 64, 2, 50, Seed{2});
  CHECK(easy.success_fraction() >= 0.95);
  const RecoveryReport hard = recovery_experiment(kScaledGaussian, 32, 64, 24, 50, Seed{2});
  CHECK(hard.success_fraction() <= 0.1);
  for (const auto& rec : hard.records) {
    if (!rec.success) CHECK(rec.rel_error > kRecoveryTolerance);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const RecoveryReport one = recovery_experiment(kScaledGaussian, 16, 32, 3, 40, Seed{3}, 1);
  const RecoveryReport many = recovery_experiment(kScaledGaussian, 16, 32, 3, 40, Seed{3}, 4);
  REQUIRE(one.records.size() == many.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(one.records[i].rel_error == many.records[i].rel_error);
    CHECK(one.records[i].iterations == many.records[i].iterations);
  }
}

TEST_CASE("identity is certified and recovers everything") {
  const CertifiedRecoveryReport r = certified_recovery_check(Matrix::identity(8), 1);
  CHECK(r.certificate.status == CertificateStatus::Certified);
  CHECK(r.instances == 100);
  CHECK(r.failures == 0);
  for (const auto& rec : r.records) CHECK(rec.rel_error <= 1e-12);

  const CertifiedRecoveryReport e = certified_recovery_check_exhaustive(Matrix::identity(6), 2);
  CHECK(e.instances == 15 * 4);
  CHECK(e.failures == 0);
}

TEST_CASE("duplicated column is not certified and produces an l1 tie") {
  Matrix a = sample_matrix({Distribution::Gaussian, 6, 8, Normalization::ScaledByInvSqrtRows}, Seed{4}, 0);
  a.set_column(5, a.column(2));
  const CertifiedRecoveryReport r = certified_recovery_check(a, 1);
  CHECK(r.certificate.status == CertificateStatus::NotCertified);

  // x = e_2 + e_5: y = 2 A_2 also equals A (2 e_2), and every split
  // (t, 2 - t) with t in [0, 2] has the same l1 norm.
  Vector x(8, 0.0);
  x[2] = 1.0;
  x[5] = 1.0;
  const RecoveryRecord rec = recover(a, x, 0, 2);
  const BasisPursuitResult bp = basis_pursuit(a, a.apply(x));
  CHECK(bp.primal == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(bp.x[2] + bp.x[5] == doctest::Approx(2.0).epsilon(1e-8));
  if (!rec.success) CHECK(rec.l1_tie);

  Vector unbalanced(8, 0.0);
  unbalanced[2] = 2.0;
  const RecoveryRecord u = recover(a, unbalanced, 1, 1);
  if (!u.success) CHECK(u.l1_tie);
}

TEST_CASE("small Gaussian: certificate agrees with exhaustive recovery") {
  for (std::size_t t = 0; t < 20; ++t) {
    const Matrix a = sample_matrix({Distribution::Gaussian, 12, 16, Normalization::ScaledByInvSqrtRows}, Seed{5}, t);
    const CertifiedRecoveryReport r = certified_recovery_check_exhaustive(a, 1);
    CHECK(r.instances == 32);
    CHECK(r.certificate.delta == exact_ric(a, 2).delta);
    CHECK((r.certificate.status == CertificateStatus::Certified) == (r.certificate.delta <= kRecoveryThreshold));
    if (r.certificate.status == CertificateStatus::Certified) CHECK(r.failures == 0);
  }
}

TEST_CASE("budgets and arguments") {
  const Matrix a = sample_matrix({Distribution::Gaussian, 30, 60, Normalization::ScaledByInvSqrtRows}, Seed{6}, 0);
  CHECK_THROWS_AS(certified_recovery_check(a, 5, 100, Seed{0}, 1000), BudgetError);
  CHECK_THROWS_AS(certified_recovery_check_exhaustive(a, 5, 1000), BudgetError);
  CHECK_THROWS_AS(certified_recovery_check(a, 1, 99), DomainError);
  CHECK_THROWS_AS(recovery_experiment(kScaledGaussian, 10, 5, 1, 1, Seed{0}), DomainError);
}
