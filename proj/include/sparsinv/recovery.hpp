#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sparsinv/basis_pursuit.hpp"
#include "sparsinv/ensembles.hpp"
#include "sparsinv/matrix.hpp"
#include "sparsinv/ric.hpp"
#include "sparsinv/rng.hpp"

namespace sparsinv {

// Relative l2 error below which a recovery counts as exact.
inline constexpr double kRecoveryTolerance = 1e-6;
inline constexpr std::size_t kMinCertifiedInstances = 100;

struct RecoveryRecord {
  std::size_t trial = 0;
  std::size_t s = 0;
  bool success = false;
  double rel_error = 0.0;  // ||x* - x|| / ||x||; absolute error when x = 0
  int iterations = 0;
  bool budget_exceeded = false;
  // Solver output has l1 norm within tolerance of the true signal's, so the
  // true signal is a minimizer but not the one returned.
  bool l1_tie = false;
};

// s-sparse signal: uniform random support, standard normal magnitudes, from
// Rng::stream(seed, trial, Signal).
Vector random_sparse_signal(std::size_t n, std::size_t s, Seed seed, std::size_t trial);

// Solves basis pursuit for y = A x and scores it. Solver budget errors count
// as failures.
RecoveryRecord recover(const Matrix& a, std::span<const double> x_true, std::size_t trial, std::size_t s,
                       double tol = kBasisPursuitTolerance);

struct RecoveryReport {
  EnsembleSpec spec;  // rows = n, cols = N
  std::size_t s = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::vector<RecoveryRecord> records;
  double success_fraction() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
};

// Trial t: A from sample_matrix(spec with rows n, cols N, seed, t), signal
// from random_sparse_signal(N, s, seed, t).
RecoveryReport recovery_experiment(const EnsembleSpec& spec, std::size_t n, std::size_t cols, std::size_t s,
                                   std::size_t trials, Seed seed, unsigned workers = 1);

struct CertifiedRecoveryReport {
  RecoveryCertificate certificate;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::size_t ties = 0;
  std::vector<RecoveryRecord> records;
};

// Links ct_certificate(A, s) to observed recovery on `instances` random
// s-sparse signals. Throws InconsistencyError when A is Certified and any
// instance fails, and BudgetError when exact delta_{2s} is not enumerable.
CertifiedRecoveryReport certified_recovery_check(const Matrix& a, std::size_t s,
                                                 std::size_t instances = kMinCertifiedInstances,
                                                 Seed seed = Seed{0},
                                                 std::uint64_t budget = kDefaultEnumerationBudget);

// Same check over every support of size s and every sign pattern, with unit
// magnitudes: C(N, s) 2^s instances, which must not exceed `budget`.
CertifiedRecoveryReport certified_recovery_check_exhaustive(const Matrix& a, std::size_t s,
                                                            std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace sparsinv
