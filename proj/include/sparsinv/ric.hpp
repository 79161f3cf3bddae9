#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sparsinv/matrix.hpp"
#include "sparsinv/rng.hpp"
#include "sparsinv/support_set.hpp"

namespace sparsinv {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000;
// sqrt(2) - 1: recovery threshold on delta_{2s}.
inline constexpr double kRecoveryThreshold = 0.41421356237309515;

enum class RicMethod { Exhaustive, RandomizedLowerBound };
std::string_view to_string(RicMethod m) noexcept;

// Extreme singular values of the column submatrix A_T.
struct SupportExtremes {
  double largest = 0.0;
  double smallest = 0.0;
  // max(s_max^2 - 1, 1 - s_min^2)
  double delta() const noexcept;
};
SupportExtremes support_extremes(const Matrix& a, const SupportSet& support);

struct RicReport {
  std::size_t s = 0;
  double delta = 0.0;
  SupportSet worst_support;
  RicMethod method = RicMethod::Exhaustive;
  std::uint64_t supports_evaluated = 0;  // "trials" for the randomized method
  std::string matrix_checksum;
};

// Fields: s, delta_s, worst_support (zero-based), method, trials,
// matrix_checksum.
nlohmann::json to_json(const RicReport& report);

// Exact delta_s over all C(cols, s) supports in lexicographic order, split
// into contiguous rank ranges over `workers` threads. Ties go to the
// lexicographically smallest support, so the report does not depend on the
// worker count. Throws BudgetError if C(cols, s) > budget.
RicReport exact_ric(const Matrix& a, std::size_t s, std::uint64_t budget = kDefaultEnumerationBudget,
                    unsigned workers = 1);

// Lower bound on delta_s from `trials` uniformly random supports. When
// trials >= C(cols, s) the supports are drawn without replacement, i.e. a
// random permutation of all of them, and the result is exact.
RicReport randomized_ric_lower_bound(const Matrix& a, std::size_t s, std::size_t trials, Seed seed);

struct PropositionResult {
  std::size_t rows = 0;  // n
  std::size_t cols = 0;  // N
  std::size_t s = 0;
  double delta = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  RicMethod method = RicMethod::Exhaustive;
  std::vector<double> deltas;  // per trial
  double success_fraction() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
  // Binomial standard error of the success fraction.
  double standard_error() const noexcept;
};

// Fraction of A = Gaussian(n x N) / sqrt(n) draws with delta_s <= delta.
// Uses exact_ric when C(N, s) <= budget, otherwise the randomized lower bound
// (which can only overstate success; `method` records which one ran).
PropositionResult ric_proposition_experiment(std::size_t n, std::size_t cols, std::size_t s, double delta,
                                             std::size_t trials, Seed seed,
                                             std::uint64_t budget = kDefaultEnumerationBudget,
                                             std::size_t randomized_trials = 10000, unsigned workers = 1);

enum class CertificateStatus { Certified, NotCertified, Unknown };
std::string_view to_string(CertificateStatus s) noexcept;

struct RecoveryCertificate {
  CertificateStatus status = CertificateStatus::Unknown;
  std::size_t order = 0;        // 2s, clipped to cols
  double delta = 0.0;           // exact delta_{2s}, or a lower bound
  RicMethod method = RicMethod::Exhaustive;
  std::uint64_t budget = 0;
};

// Certified iff exact delta_{2s} <= sqrt(2) - 1. When enumeration exceeds the
// budget, NotCertified if the randomized lower bound already exceeds the
// threshold, else Unknown.
RecoveryCertificate ct_certificate(const Matrix& a, std::size_t s,
                                   std::uint64_t budget = kDefaultEnumerationBudget,
                                   std::size_t randomized_trials = 10000, Seed seed = Seed{0});

}  // namespace sparsinv
