#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparsinv/ensembles.hpp"
#include "sparsinv/matrix.hpp"
#include "sparsinv/ric.hpp"
#include "sparsinv/sparse_geometry.hpp"
#include "sparsinv/stats.hpp"
#include "sparsinv/support_set.hpp"

namespace sparsinv {

// One Monte Carlo sample.
struct TrialRecord {
  std::size_t trial = 0;
  std::size_t rows = 0;  // N
  std::size_t cols = 0;  // n
  std::string statistic;
  double value = 0.0;
  Seed seed;
};

struct TailPoint {
  double eps = 0.0;
  double probability = 0.0;
  Interval confidence;  // Wilson, 95%
};

struct TrendRow {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Summary summary;
};

// Aggregate of one experiment. `records` feed the raw CSV; everything else
// is the JSON summary. All fields are order-independent folds over records.
struct ExperimentReport {
  std::string experiment;
  std::string statistic;
  nlohmann::json config = nlohmann::json::object();
  Summary summary;
  std::optional<double> ks;  // against the configured reference CDF
  std::vector<TailPoint> tail_curve;
  std::optional<LinearFit> tail_fit;
  std::vector<TrendRow> trend;
  std::size_t skipped = 0;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<TrialRecord> records;

  std::vector<double> values() const;
};

nlohmann::json to_json(const ExperimentReport& report);

// Default eps grid: 101 uniform points on [0, 1].
std::vector<double> default_eps_grid();

inline constexpr std::size_t kMinSquareTrials = 100;
inline constexpr std::size_t kMinHyperplaneTrials = 1000;
inline constexpr std::size_t kMinBerryEsseenTrials = 2000;
inline constexpr std::size_t kMinWitnessSamples = 1000;
// Tail slope is fitted on eps in [0, kTailFitMaxEps].
inline constexpr double kTailFitMaxEps = 0.25;

// sqrt(N) * s_N(A) over `trials` draws of the N x N ensemble. Entries follow
// `spec.distribution` / `spec.normalization`; spec.rows / cols are ignored.
ExperimentReport square_sv_experiment(const EnsembleSpec& spec, std::size_t n, std::size_t trials, Seed seed,
                                      unsigned workers = 1);
// Same statistic across several N; `trend` holds one row per N.
ExperimentReport square_sv_trend(const EnsembleSpec& spec, std::span<const std::size_t> sizes,
                                 std::size_t trials, Seed seed, unsigned workers = 1);

// s_n(A) / (sqrt(N) - sqrt(n - 1)) for N x n matrices, n <= N.
ExperimentReport rectangular_sv_experiment(const EnsembleSpec& spec, std::size_t rows, std::size_t cols,
                                           std::size_t trials, Seed seed, unsigned workers = 1);

// eps -> empirical P(s_N < eps / sqrt(N)) with Wilson intervals and a
// least-squares line on the small-eps range.
ExperimentReport tail_curve(const EnsembleSpec& spec, std::size_t n, std::size_t trials,
                            std::span<const double> eps_grid, Seed seed, unsigned workers = 1);

struct SparseMinimum {
  double value = 0.0;
  SupportSet support;
  RicMethod method = RicMethod::Exhaustive;
  std::uint64_t supports_evaluated = 0;
  // Exhaustive results are exact; randomized ones only upper-bound the true
  // minimum and certify nothing.
  bool exact() const noexcept { return method == RicMethod::Exhaustive; }
};

// min over |T| = s of s_min(A_T). Exhaustive when C(cols, s) <= budget;
// otherwise min over `random_supports` random supports.
SparseMinimum sparse_minimum(const Matrix& a, std::size_t s, std::uint64_t budget = kDefaultEnumerationBudget,
                             std::size_t random_supports = 10000, Seed seed = Seed{0});

struct CompressibleBound {
  SparseMinimum sparse;
  double largest_singular_value = 0.0;
  double bound = 0.0;  // sparse.value - c' * s_1(A); may be <= 0 (vacuous)
  bool certified() const noexcept { return sparse.exact() && bound > 0.0; }
};

CompressibleBound compressible_lower_bound(const Matrix& a, const SparsityParams& params,
                                           std::uint64_t budget = kDefaultEnumerationBudget,
                                           std::size_t random_supports = 10000, Seed seed = Seed{0});

struct BoundValidation {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double min_norm = 0.0;  // min ||A x|| over the sampled vectors
};

// Checks ||A x|| >= bound on `samples` sampled compressible unit vectors.
BoundValidation validate_compressible_bound(const Matrix& a, const SparsityParams& params, double bound,
                                            std::size_t samples, Seed seed);

// dist(X_1, H_1), X_1 the first column, H_1 the span of the others.
// Gaussian: KS distance to the half-normal law. Other laws: the same number,
// read as a discrepancy. Rank-deficient H_1 is skipped and counted.
ExperimentReport hyperplane_distance_experiment(const EnsembleSpec& spec, std::size_t n, std::size_t trials,
                                                Seed seed, unsigned workers = 1);

struct BerryEsseenResult {
  std::size_t n = 0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  double discrepancy = 0.0;  // D(N)
  double band = 0.0;         // 95% DKW half-width for `samples`
  double incompressible_fraction = 0.0;
  std::vector<double> abs_sums;  // |S| per kept trial, in trial order
  std::vector<std::size_t> kept_trials;
};

// S = <a, X> with a the unit normal of an independent random hyperplane and
// X an independent column, both from the ensemble.
// D(N) = max over the grid of |P(|S| < eps) - P(|g| < eps)|.
BerryEsseenResult berry_esseen_discrepancy(const EnsembleSpec& spec, std::size_t n, std::size_t trials,
                                           std::span<const double> eps_grid, Seed seed,
                                           const SparsityParams& params = SparsityParams::defaults(),
                                           unsigned workers = 1);

struct ChainWitness {
  double norm_ax = 0.0;       // ||A x||
  double dist_ax = 0.0;       // dist(A x, H_k)
  double scaled_dist = 0.0;   // |x_k| dist(A_k, H_k)
  bool passed = false;
};

inline constexpr double kChainTolerance = 1e-6;

// ||A x|| >= dist(A x, H_k) and dist(A x, H_k) = |x_k| dist(A_k, H_k), both to
// relative tolerance `tol` (relative to ||A x|| + |x_k| ||A_k||).
ChainWitness geometric_chain_check(const Matrix& a, std::span<const double> x, std::size_t k,
                                   double tol = kChainTolerance);

struct WitnessReport {
  std::size_t samples = 0;
  std::size_t violations = 0;          // samples with ||A x|| < witness
  double min_scaled_norm = 0.0;        // min sqrt(N) ||A x||
  double min_witness = 0.0;            // min over samples of the witness
  std::vector<double> column_distances;  // dist(A_k, H_k), k = 0..N-1
};

// Rejection-samples incompressible unit x and checks
//   ||A x|| >= max_k |x_k| dist(A_k, H_k).
WitnessReport incompressible_minimum_witness(const Matrix& a, const SparsityParams& params, std::size_t samples,
                                             Seed seed, double tol = kChainTolerance);

}  // namespace sparsinv
