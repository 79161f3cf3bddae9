#include "sparsinv/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "sparsinv/errors.hpp"
#include "sparsinv/parallel.hpp"
#include "sparsinv/support_set.hpp"

namespace sparsinv {

namespace {

void check_inconsistency(const CertifiedRecoveryReport& report) {
  if (report.certificate.status == CertificateStatus::Certified && report.failures > 0) {
    throw InconsistencyError("matrix certified by delta_2s = " + std::to_string(report.certificate.delta) +
                             " but " + std::to_string(report.failures) + " sparse recoveries failed");
  }
}

RecoveryCertificate exact_certificate(const Matrix& a, std::size_t s, std::uint64_t budget) {
  const std::size_t order = std::min(2 * s, a.cols());
  const auto total = binomial(a.cols(), order);
  if (order <= a.rows() && (!total || *total > budget)) {
    throw BudgetError("exact delta_2s is not enumerable within the budget");
  }
  return ct_certificate(a, s, budget);
}

void tally(CertifiedRecoveryReport& report, RecoveryRecord record) {
  ++report.instances;
  if (!record.success) ++report.failures;
  if (record.l1_tie) ++report.ties;
  report.records.push_back(record);
}

}  // namespace

Vector random_sparse_signal(std::size_t n, std::size_t s, Seed seed, std::size_t trial) {
  if (s > n) throw DomainError("sparsity exceeds dimension");
  Vector x(n, 0.0);
  if (s == 0) return x;
  Rng rng = Rng::stream(seed, trial, StreamTag::Signal);
  const SupportSet support = SupportSet::random(s, n, rng);
  for (std::size_t i : support.indices()) x[i] = rng.normal();
  return x;
}

RecoveryRecord recover(const Matrix& a, std::span<const double> x_true, std::size_t trial, std::size_t s,
                       double tol) {
  RecoveryRecord rec;
  rec.trial = trial;
  rec.s = s;
  const Vector y = a.apply(x_true);
  Vector x;
  try {
    const BasisPursuitResult r = basis_pursuit(a, y, tol);
    x = r.x;
    rec.iterations = r.iterations;
  } catch (const ConvergenceError& e) {
    rec.budget_exceeded = true;
    x = e.best_iterate();
    rec.iterations = kBasisPursuitMaxIterations;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) err += (x[i] - x_true[i]) * (x[i] - x_true[i]);
  err = std::sqrt(err);
  const double scale = norm2(x_true);
  rec.rel_error = scale > 0.0 ? err / scale : err;
  rec.success = !rec.budget_exceeded && err <= kRecoveryTolerance * scale;
  if (!rec.success && !rec.budget_exceeded) {
    const double l1 = norm1(x_true);
    rec.l1_tie = norm1(x) <= l1 + tol * std::max(1.0, l1);
  }
  return rec;
}

RecoveryReport recovery_experiment(const EnsembleSpec& spec, std::size_t n, std::size_t cols, std::size_t s,
                                   std::size_t trials, Seed seed, unsigned workers) {
  if (n == 0 || cols == 0) throw DimensionError("dimensions must be positive");
  if (n > cols) throw DomainError("recovery experiment needs n <= N");
  if (s > cols) throw DomainError("sparsity exceeds N");
  RecoveryReport report;
  report.spec = {spec.distribution, n, cols, spec.normalization};
  report.s = s;
  report.trials = trials;
  report.records.resize(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const Matrix a = sample_matrix(report.spec, seed, t);
    const Vector x = random_sparse_signal(cols, s, seed, t);
    report.records[t] = recover(a, x, t, s);
  });
  for (const auto& r : report.records) report.successes += r.success;
  return report;
}

CertifiedRecoveryReport certified_recovery_check(const Matrix& a, std::size_t s, std::size_t instances, Seed seed,
                                                 std::uint64_t budget) {
  if (s < 1 || s > a.cols()) throw DomainError("sparsity must satisfy 1 <= s <= N");
  if (instances < kMinCertifiedInstances) {
    throw DomainError("certified recovery check needs at least " + std::to_string(kMinCertifiedInstances) +
                      " instances");
  }
  CertifiedRecoveryReport report;
  report.certificate = exact_certificate(a, s, budget);
  for (std::size_t t = 0; t < instances; ++t) {
    tally(report, recover(a, random_sparse_signal(a.cols(), s, seed, t), t, s));
  }
  check_inconsistency(report);
  return report;
}

CertifiedRecoveryReport certified_recovery_check_exhaustive(const Matrix& a, std::size_t s, std::uint64_t budget) {
  if (s < 1 || s > a.cols()) throw DomainError("sparsity must satisfy 1 <= s <= N");
  const auto supports = binomial(a.cols(), s);
  if (!supports || s >= 63 || *supports > (budget >> s)) {
    throw BudgetError("C(N, s) 2^s instances exceed the budget");
  }
  CertifiedRecoveryReport report;
  report.certificate = exact_certificate(a, s, budget);
  SupportSet support = SupportSet::first(s, a.cols());
  std::size_t trial = 0;
  for (std::uint64_t r = 0; r < *supports; ++r, support.next()) {
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << s); ++signs) {
      Vector x(a.cols(), 0.0);
      for (std::size_t j = 0; j < s; ++j) x[support.indices()[j]] = ((signs >> j) & 1U) ? -1.0 : 1.0;
      tally(report, recover(a, x, trial++, s));
    }
  }
  check_inconsistency(report);
  return report;
}

}  // namespace sparsinv
