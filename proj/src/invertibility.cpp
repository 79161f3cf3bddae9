#include "sparsinv/invertibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "sparsinv/errors.hpp"
#include "sparsinv/linalg.hpp"
#include "sparsinv/parallel.hpp"

namespace sparsinv {

namespace {

void require_trials(std::size_t trials, std::size_t minimum, const char* what) {
  if (trials < minimum) {
    throw DomainError(std::string(what) + " needs at least " + std::to_string(minimum) + " trials");
  }
}

nlohmann::json ensemble_json(const EnsembleSpec& spec) {
  return {{"distribution", std::string(to_string(spec.distribution))},
          {"normalization", std::string(to_string(spec.normalization))}};
}

nlohmann::json summary_json(const Summary& s) {
  return {{"samples", s.count}, {"min", s.min},       {"q1", s.q1},    {"median", s.median},
          {"q3", s.q3},         {"max", s.max},       {"mean", s.mean}};
}

void finish(ExperimentReport& report) {
  const std::vector<double> v = report.values();
  if (!v.empty()) report.summary = summarize(v);
}

// sqrt(N) s_N for one trial.
double scaled_smallest_sv(const EnsembleSpec& spec, std::size_t n, Seed seed, std::size_t trial) {
  const EnsembleSpec square{spec.distribution, n, n, spec.normalization};
  const Matrix a = sample_matrix(square, seed, trial);
  return std::sqrt(static_cast<double>(n)) * smallest_singular_value(a);
}

std::vector<TrialRecord> square_records(const EnsembleSpec& spec, std::size_t n, std::size_t trials, Seed seed,
                                        unsigned workers) {
  std::vector<TrialRecord> records(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    records[t] = {t, n, n, "sqrtN_times_sN", scaled_smallest_sv(spec, n, seed, t), seed};
  });
  return records;
}

// Distance from v to the span of the columns of `a` other than k.
class OthersProjector {
 public:
  OthersProjector(const Matrix& a, std::size_t k) {
    if (a.cols() > 1) projector_.emplace(a.drop_column(k));
  }
  double distance(std::span<const double> v) const { return projector_ ? projector_->distance(v) : norm2(v); }

 private:
  std::optional<ColspanProjector> projector_;
};

}  // namespace

std::vector<double> ExperimentReport::values() const {
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(r.value);
  return v;
}

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["experiment"] = report.experiment;
  j["statistic"] = report.statistic;
  j["config"] = report.config;
  j["summary"] = summary_json(report.summary);
  j["skipped"] = report.skipped;
  if (report.ks) j["ks"] = *report.ks;
  if (!report.tail_curve.empty()) {
    auto& curve = j["tail_curve"] = nlohmann::json::array();
    for (const auto& p : report.tail_curve) {
      curve.push_back({{"eps", p.eps}, {"p", p.probability}, {"lower", p.confidence.lower},
                       {"upper", p.confidence.upper}});
    }
  }
  if (report.tail_fit) j["tail_fit"] = {{"slope", report.tail_fit->slope}, {"intercept", report.tail_fit->intercept}};
  if (!report.trend.empty()) {
    auto& trend = j["trend"] = nlohmann::json::array();
    for (const auto& row : report.trend) {
      nlohmann::json r = summary_json(row.summary);
      r["N"] = row.rows;
      r["n"] = row.cols;
      trend.push_back(std::move(r));
    }
  }
  j["metrics"] = report.metrics;
  return j;
}

std::vector<double> default_eps_grid() {
  std::vector<double> grid(101);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / 100.0;
  return grid;
}

ExperimentReport square_sv_experiment(const EnsembleSpec& spec, std::size_t n, std::size_t trials, Seed seed,
                                      unsigned workers) {
  if (n == 0) throw DimensionError("N must be positive");
  require_trials(trials, kMinSquareTrials, "square_sv_experiment");
  ExperimentReport report;
  report.experiment = "square-sv";
  report.statistic = "sqrtN_times_sN";
  report.config = {{"ensemble", ensemble_json(spec)}, {"N", n}, {"trials", trials}, {"seed", seed.value}};
  report.records = square_records(spec, n, trials, seed, workers);
  finish(report);
  return report;
}

ExperimentReport square_sv_trend(const EnsembleSpec& spec, std::span<const std::size_t> sizes,
                                 std::size_t trials, Seed seed, unsigned workers) {
  if (sizes.empty()) throw DomainError("trend needs at least one N");
  require_trials(trials, kMinSquareTrials, "square_sv_trend");
  ExperimentReport report;
  report.experiment = "square-sv";
  report.statistic = "sqrtN_times_sN";
  report.config = {{"ensemble", ensemble_json(spec)},
                   {"N", std::vector<std::size_t>(sizes.begin(), sizes.end())},
                   {"trials", trials},
                   {"seed", seed.value}};
  double lo = 0.0, hi = 0.0;
  for (std::size_t n : sizes) {
    if (n == 0) throw DimensionError("N must be positive");
    auto records = square_records(spec, n, trials, seed, workers);
    std::vector<double> v;
    for (const auto& r : records) v.push_back(r.value);
    const Summary s = summarize(v);
    lo = report.trend.empty() ? s.median : std::min(lo, s.median);
    hi = report.trend.empty() ? s.median : std::max(hi, s.median);
    report.trend.push_back({n, n, s});
    report.records.insert(report.records.end(), records.begin(), records.end());
  }
  // Largest pairwise relative gap between medians, relative to the smaller.
  report.metrics["median_spread"] = lo > 0.0 ? (hi - lo) / lo : INFINITY;
  finish(report);
  return report;
}

ExperimentReport rectangular_sv_experiment(const EnsembleSpec& spec, std::size_t rows, std::size_t cols,
                                           std::size_t trials, Seed seed, unsigned workers) {
  if (rows == 0 || cols == 0) throw DimensionError("dimensions must be positive");
  if (cols > rows) throw DomainError("rectangular experiment needs n <= N");
  if (trials == 0) throw DomainError("need at least one trial");
  const double gap = std::sqrt(static_cast<double>(rows)) - std::sqrt(static_cast<double>(cols - 1));
  const EnsembleSpec shape{spec.distribution, rows, cols, spec.normalization};

  ExperimentReport report;
  report.experiment = "rect-sv";
  report.statistic = "s_n_over_gap";
  report.config = {{"ensemble", ensemble_json(spec)}, {"N", rows}, {"n", cols}, {"trials", trials},
                   {"seed", seed.value}};
  report.metrics["gap"] = gap;
  report.records.resize(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const Matrix a = sample_matrix(shape, seed, t);
    const double s = cols == 1 ? norm2(a.entries()) : smallest_singular_value(a);
    report.records[t] = {t, rows, cols, report.statistic, s / gap, seed};
  });
  finish(report);
  return report;
}

ExperimentReport tail_curve(const EnsembleSpec& spec, std::size_t n, std::size_t trials,
                            std::span<const double> eps_grid, Seed seed, unsigned workers) {
  if (n == 0) throw DimensionError("N must be positive");
  if (trials == 0) throw DomainError("need at least one trial");
  if (eps_grid.empty()) throw DomainError("eps grid must be nonempty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] >= 0.0 && eps_grid[i] <= 2.0)) throw DomainError("eps grid must lie in [0, 2]");
    if (i > 0 && eps_grid[i] < eps_grid[i - 1]) throw DomainError("eps grid must be sorted");
  }
  ExperimentReport report;
  report.experiment = "tail-curve";
  report.statistic = "sqrtN_times_sN";
  report.config = {{"ensemble", ensemble_json(spec)},
                   {"N", n},
                   {"trials", trials},
                   {"seed", seed.value},
                   {"eps_grid", std::vector<double>(eps_grid.begin(), eps_grid.end())}};
  report.records = square_records(spec, n, trials, seed, workers);
  finish(report);

  std::vector<double> sorted = report.values();
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> fx, fy;
  for (double eps : eps_grid) {
    const auto below = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), eps) - sorted.begin());
    const double p = static_cast<double>(below) / static_cast<double>(trials);
    report.tail_curve.push_back({eps, p, wilson_interval(below, trials)});
    if (eps <= kTailFitMaxEps) {
      fx.push_back(eps);
      fy.push_back(p);
    }
  }
  if (fx.size() >= 2 && fx.front() != fx.back()) report.tail_fit = fit_line(fx, fy);
  return report;
}

SparseMinimum sparse_minimum(const Matrix& a, std::size_t s, std::uint64_t budget, std::size_t random_supports,
                             Seed seed) {
  if (a.empty()) throw DimensionError("matrix must be nonempty");
  if (s < 1 || s > a.cols()) throw DomainError("sparsity must satisfy 1 <= s <= cols");
  SparseMinimum best;
  bool have = false;
  auto offer = [&](const SupportSet& t) {
    const double v = support_extremes(a, t).smallest;
    if (!have || v < best.value || (v == best.value && t < best.support)) {
      best.value = v;
      best.support = t;
      have = true;
    }
  };
  const auto total = binomial(a.cols(), s);
  if (total && *total <= budget) {
    best.method = RicMethod::Exhaustive;
    SupportSet t = SupportSet::first(s, a.cols());
    for (std::uint64_t r = 0; r < *total; ++r) {
      offer(t);
      t.next();
    }
    best.supports_evaluated = *total;
    return best;
  }
  if (random_supports == 0) throw BudgetError("sparse minimum exceeds the enumeration budget");
  best.method = RicMethod::RandomizedLowerBound;
  Rng rng = Rng::stream(seed, 0, StreamTag::Support);
  for (std::size_t k = 0; k < random_supports; ++k) offer(SupportSet::random(s, a.cols(), rng));
  best.supports_evaluated = random_supports;
  return best;
}

CompressibleBound compressible_lower_bound(const Matrix& a, const SparsityParams& params, std::uint64_t budget,
                                           std::size_t random_supports, Seed seed) {
  params.validate();
  CompressibleBound out;
  out.sparse = sparse_minimum(a, params.sparsity(a.cols()), budget, random_supports, seed);
  out.largest_singular_value = largest_singular_value(a);
  out.bound = out.sparse.value - params.compressibility_radius * out.largest_singular_value;
  return out;
}

BoundValidation validate_compressible_bound(const Matrix& a, const SparsityParams& params, double bound,
                                            std::size_t samples, Seed seed) {
  if (samples == 0) throw DomainError("need at least one sample");
  BoundValidation v;
  v.samples = samples;
  v.min_norm = INFINITY;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, i, StreamTag::Vector);
    const Vector x = sample_compressible(a.cols(), params, rng);
    const double norm = norm2(a.apply(x));
    v.min_norm = std::min(v.min_norm, norm);
    if (norm < bound - 1e-12 * std::max(1.0, std::abs(bound))) ++v.violations;
  }
  return v;
}

ExperimentReport hyperplane_distance_experiment(const EnsembleSpec& spec, std::size_t n, std::size_t trials,
                                                Seed seed, unsigned workers) {
  if (n < 2) throw DomainError("hyperplane distance needs N >= 2");
  require_trials(trials, kMinHyperplaneTrials, "hyperplane_distance_experiment");
  const EnsembleSpec square{spec.distribution, n, n, spec.normalization};

  ExperimentReport report;
  report.experiment = "hyperplane-dist";
  report.statistic = "dist_X1_H1";
  report.config = {{"ensemble", ensemble_json(spec)}, {"N", n}, {"trials", trials}, {"seed", seed.value}};

  std::vector<std::optional<double>> dist(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    const Matrix a = sample_matrix(square, seed, t);
    const ColspanProjector h(a.drop_column(0));
    if (h.rank() < n - 1) return;
    dist[t] = h.distance(a.column(0));
  });
  for (std::size_t t = 0; t < trials; ++t) {
    if (dist[t]) {
      report.records.push_back({t, n, n, report.statistic, *dist[t], seed});
    } else {
      ++report.skipped;
    }
  }
  if (report.records.empty()) throw InconsistencyError("every hyperplane was rank-deficient");
  finish(report);
  report.ks = ks_statistic(report.values(), half_normal_cdf);
  report.metrics["reference"] = "half-normal";
  report.metrics["ks_role"] = spec.distribution == Distribution::Gaussian ? "goodness-of-fit" : "discrepancy";
  return report;
}

BerryEsseenResult berry_esseen_discrepancy(const EnsembleSpec& spec, std::size_t n, std::size_t trials,
                                           std::span<const double> eps_grid, Seed seed,
                                           const SparsityParams& params, unsigned workers) {
  if (n < 2) throw DomainError("Berry-Esseen experiment needs N >= 2");
  if (spec.distribution == Distribution::Identity) throw DomainError("identity ensemble has no random hyperplane");
  require_trials(trials, kMinBerryEsseenTrials, "berry_esseen_discrepancy");
  if (eps_grid.empty()) throw DomainError("eps grid must be nonempty");
  params.validate();

  const EnsembleSpec plane{spec.distribution, n, n - 1, Normalization::Raw};
  std::vector<double> value(trials, 0.0);
  std::vector<signed char> state(trials, 0);  // 0 skipped, 1 compressible, 2 incompressible
  parallel_for(trials, workers, [&](std::size_t t) {
    const Matrix b = sample_matrix(plane, seed, t, StreamTag::Hyperplane);
    Vector a;
    try {
      a = unit_normal(b, RankCheck::Estimate);
    } catch (const RankError&) {
      return;
    }
    Rng rng = Rng::stream(seed, t, StreamTag::Column);
    const Vector x = sample_vector(spec.distribution, n, rng);
    value[t] = std::abs(dot(a, x));
    state[t] = classify(a, params) == VectorClass::Incompressible ? 2 : 1;
  });

  BerryEsseenResult r;
  r.n = n;
  std::size_t incompressible = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    if (state[t] == 0) {
      ++r.skipped;
      continue;
    }
    r.abs_sums.push_back(value[t]);
    r.kept_trials.push_back(t);
    if (state[t] == 2) ++incompressible;
  }
  r.samples = r.abs_sums.size();
  if (r.samples == 0) throw InconsistencyError("every hyperplane was rank-deficient");
  r.incompressible_fraction = static_cast<double>(incompressible) / static_cast<double>(r.samples);
  r.band = dkw_band(r.samples);

  std::vector<double> sorted = r.abs_sums;
  std::sort(sorted.begin(), sorted.end());
  for (double eps : eps_grid) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), eps) - sorted.begin();
    const double p = static_cast<double>(below) / static_cast<double>(r.samples);
    r.discrepancy = std::max(r.discrepancy, std::abs(p - half_normal_cdf(eps)));
  }
  return r;
}

ChainWitness geometric_chain_check(const Matrix& a, std::span<const double> x, std::size_t k, double tol) {
  if (a.rows() != a.cols() || a.empty()) throw DimensionError("chain check needs a nonempty square matrix");
  if (x.size() != a.cols()) throw DimensionError("x length != N");
  if (k >= a.cols()) throw DomainError("index k out of range");
  require_unit(x);

  const OthersProjector h(a, k);
  const Vector ax = a.apply(x);
  const Vector ak = a.column(k);
  ChainWitness w;
  w.norm_ax = norm2(ax);
  w.dist_ax = h.distance(ax);
  w.scaled_dist = std::abs(x[k]) * h.distance(ak);
  const double scale = w.norm_ax + std::abs(x[k]) * norm2(ak);
  w.passed = w.norm_ax >= w.dist_ax - tol * scale && std::abs(w.dist_ax - w.scaled_dist) <= tol * scale;
  return w;
}

WitnessReport incompressible_minimum_witness(const Matrix& a, const SparsityParams& params, std::size_t samples,
                                             Seed seed, double tol) {
  if (a.rows() != a.cols() || a.empty()) throw DimensionError("witness needs a nonempty square matrix");
  if (samples < kMinWitnessSamples) {
    throw DomainError("incompressible witness needs at least " + std::to_string(kMinWitnessSamples) + " samples");
  }
  params.validate();
  const std::size_t n = a.cols();
  WitnessReport report;
  report.samples = samples;
  report.column_distances.resize(n);
  for (std::size_t k = 0; k < n; ++k) report.column_distances[k] = OthersProjector(a, k).distance(a.column(k));

  const double root_n = std::sqrt(static_cast<double>(n));
  report.min_scaled_norm = INFINITY;
  report.min_witness = INFINITY;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, i, StreamTag::Vector);
    const Vector x = sample_in_class(n, params, VectorClass::Incompressible, rng);
    double witness = 0.0;
    for (std::size_t k = 0; k < n; ++k) witness = std::max(witness, std::abs(x[k]) * report.column_distances[k]);
    const double norm = norm2(a.apply(x));
    if (norm < witness - tol * (norm + witness)) ++report.violations;
    report.min_scaled_norm = std::min(report.min_scaled_norm, root_n * norm);
    report.min_witness = std::min(report.min_witness, witness);
  }
  return report;
}

}  // namespace sparsinv
