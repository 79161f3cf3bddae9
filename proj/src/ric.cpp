#include "sparsinv/ric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsinv/ensembles.hpp"
#include "sparsinv/errors.hpp"
#include "sparsinv/linalg.hpp"
#include "sparsinv/parallel.hpp"

namespace sparsinv {

namespace {

struct Candidate {
  double delta = -1.0;
  SupportSet support;
  bool valid = false;

  // Larger delta wins; ties go to the lexicographically smaller support.
  void offer(double d, const SupportSet& t) {
    if (!valid || d > delta || (d == delta && t < support)) {
      delta = d;
      support = t;
      valid = true;
    }
  }
};

void check_ric_args(const Matrix& a, std::size_t s) {
  if (a.empty()) throw DimensionError("matrix must be nonempty");
  if (s < 1 || s > a.cols()) throw DomainError("sparsity must satisfy 1 <= s <= cols");
  if (s > a.rows()) throw DomainError("sparsity must not exceed the number of rows");
}

}  // namespace

std::string_view to_string(RicMethod m) noexcept {
  return m == RicMethod::Exhaustive ? "exhaustive" : "randomized-lower-bound";
}

std::string_view to_string(CertificateStatus s) noexcept {
  switch (s) {
    case CertificateStatus::Certified: return "certified";
    case CertificateStatus::NotCertified: return "not-certified";
    case CertificateStatus::Unknown: return "unknown";
  }
  return "unknown";
}

double SupportExtremes::delta() const noexcept {
  return std::max(largest * largest - 1.0, 1.0 - smallest * smallest);
}

SupportExtremes support_extremes(const Matrix& a, const SupportSet& support) {
  const Matrix sub = a.select_columns(support.indices());
  SupportExtremes e;
  if (support.size() == 1) {
    e.largest = e.smallest = norm2(sub.entries());
    return e;
  }
  const SingularSpectrum s = singular_values(sub);
  e.largest = s.largest();
  e.smallest = support.size() > a.rows() ? 0.0 : s.smallest();
  return e;
}

nlohmann::json to_json(const RicReport& report) {
  nlohmann::json j;
  j["s"] = report.s;
  j["delta_s"] = report.delta;
  j["worst_support"] = std::vector<std::size_t>(report.worst_support.indices().begin(),
                                                report.worst_support.indices().end());
  j["method"] = std::string(to_string(report.method));
  j["trials"] = report.supports_evaluated;
  j["matrix_checksum"] = report.matrix_checksum;
  return j;
}

RicReport exact_ric(const Matrix& a, std::size_t s, std::uint64_t budget, unsigned workers) {
  check_ric_args(a, s);
  const auto total = binomial(a.cols(), s);
  if (!total || *total > budget) {
    throw BudgetError("exact RIC needs C(" + std::to_string(a.cols()) + ", " + std::to_string(s) +
                      ") supports, above the enumeration budget; use the randomized bound");
  }
  const std::uint64_t count = *total;
  const unsigned parts = std::min<std::uint64_t>(resolve_workers(workers), count);
  std::vector<Candidate> best(parts);
  parallel_for(parts, parts, [&](std::size_t p) {
    const std::uint64_t begin = count * p / parts;
    const std::uint64_t end = count * (p + 1) / parts;
    SupportSet t = SupportSet::unrank(begin, s, a.cols());
    for (std::uint64_t r = begin; r < end; ++r) {
      best[p].offer(support_extremes(a, t).delta(), t);
      t.next();
    }
  });
  Candidate overall;
  for (const auto& c : best) {
    if (c.valid) overall.offer(c.delta, c.support);
  }
  RicReport report;
  report.s = s;
  report.delta = std::max(0.0, overall.delta);
  report.worst_support = overall.support;
  report.method = RicMethod::Exhaustive;
  report.supports_evaluated = count;
  report.matrix_checksum = a.checksum_hex();
  return report;
}

RicReport randomized_ric_lower_bound(const Matrix& a, std::size_t s, std::size_t trials, Seed seed) {
  check_ric_args(a, s);
  if (trials < 1) throw DomainError("randomized RIC needs at least one trial");
  Rng rng = Rng::stream(seed, 0, StreamTag::Support);
  Candidate best;
  const auto total = binomial(a.cols(), s);
  if (total && *total <= trials) {
    std::vector<std::uint64_t> ranks(*total);
    std::iota(ranks.begin(), ranks.end(), std::uint64_t{0});
    std::shuffle(ranks.begin(), ranks.end(), rng);
    for (std::uint64_t r : ranks) {
      const SupportSet t = SupportSet::unrank(r, s, a.cols());
      best.offer(support_extremes(a, t).delta(), t);
    }
  } else {
    for (std::size_t k = 0; k < trials; ++k) {
      const SupportSet t = SupportSet::random(s, a.cols(), rng);
      best.offer(support_extremes(a, t).delta(), t);
    }
  }
  RicReport report;
  report.s = s;
  report.delta = std::max(0.0, best.delta);
  report.worst_support = best.support;
  report.method = RicMethod::RandomizedLowerBound;
  report.supports_evaluated = (total && *total <= trials) ? *total : trials;
  report.matrix_checksum = a.checksum_hex();
  return report;
}

double PropositionResult::standard_error() const noexcept {
  if (trials == 0) return 0.0;
  const double p = success_fraction();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

PropositionResult ric_proposition_experiment(std::size_t n, std::size_t cols, std::size_t s, double delta,
                                             std::size_t trials, Seed seed, std::uint64_t budget,
                                             std::size_t randomized_trials, unsigned workers) {
  if (n == 0 || cols == 0) throw DimensionError("dimensions must be positive");
  if (s < 1 || s > cols || s > n) throw DomainError("sparsity out of range");
  const auto total = binomial(cols, s);
  const bool exhaustive = total && *total <= budget;

  PropositionResult result;
  result.rows = n;
  result.cols = cols;
  result.s = s;
  result.delta = delta;
  result.trials = trials;
  result.method = exhaustive ? RicMethod::Exhaustive : RicMethod::RandomizedLowerBound;
  result.deltas.assign(trials, 0.0);

  const EnsembleSpec spec{Distribution::Gaussian, n, cols, Normalization::ScaledByInvSqrtRows};
  parallel_for(trials, workers, [&](std::size_t t) {
    const Matrix a = sample_matrix(spec, seed, t);
    result.deltas[t] = exhaustive ? exact_ric(a, s, budget, 1).delta
                                  : randomized_ric_lower_bound(a, s, randomized_trials, Seed{seed.value + t}).delta;
  });
  result.successes = static_cast<std::size_t>(
      std::count_if(result.deltas.begin(), result.deltas.end(), [delta](double d) { return d <= delta; }));
  return result;
}

RecoveryCertificate ct_certificate(const Matrix& a, std::size_t s, std::uint64_t budget,
                                   std::size_t randomized_trials, Seed seed) {
  if (a.empty()) throw DimensionError("matrix must be nonempty");
  if (s < 1) throw DomainError("sparsity must be >= 1");
  RecoveryCertificate cert;
  cert.order = std::min(2 * s, a.cols());
  cert.budget = budget;
  if (cert.order > a.rows()) {
    // Any 2s columns in fewer than 2s dimensions are dependent: s_min = 0.
    cert.delta = 1.0;
    cert.status = CertificateStatus::NotCertified;
    return cert;
  }
  const auto total = binomial(a.cols(), cert.order);
  if (total && *total <= budget) {
    cert.method = RicMethod::Exhaustive;
    cert.delta = exact_ric(a, cert.order, budget).delta;
    cert.status = cert.delta <= kRecoveryThreshold ? CertificateStatus::Certified : CertificateStatus::NotCertified;
    return cert;
  }
  cert.method = RicMethod::RandomizedLowerBound;
  cert.delta = randomized_ric_lower_bound(a, cert.order, randomized_trials, seed).delta;
  cert.status = cert.delta > kRecoveryThreshold ? CertificateStatus::NotCertified : CertificateStatus::Unknown;
  return cert;
}

}  // namespace sparsinv
