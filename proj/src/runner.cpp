#include "sparsinv/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sparsinv/csv.hpp"
#include "sparsinv/errors.hpp"
#include "sparsinv/invertibility.hpp"
#include "sparsinv/linalg.hpp"
#include "sparsinv/nets.hpp"
#include "sparsinv/recovery.hpp"
#include "sparsinv/ric.hpp"

namespace sparsinv {

namespace {

using nlohmann::json;

class SamplesCsv {
 public:
  explicit SamplesCsv(std::string experiment) : experiment_(std::move(experiment)) {
    out_ << kSamplesCsvHeader << '\n';
  }
  void row(std::size_t rows, std::size_t cols, std::size_t trial, const std::string& statistic, double value,
           Seed seed) {
    out_ << experiment_ << ',' << rows << ',' << cols << ',' << trial << ',' << statistic << ','
         << format_double(value) << ',' << seed.value << '\n';
  }
  void records(const std::vector<TrialRecord>& records) {
    for (const auto& r : records) row(r.rows, r.cols, r.trial, r.statistic, r.value, r.seed);
  }
  std::string str() const { return out_.str(); }

 private:
  std::string experiment_;
  std::ostringstream out_;
};

EnsembleSpec ensemble(const ExperimentConfig& c, std::size_t rows, std::size_t cols) {
  return {c.distribution, rows, cols, c.normalization};
}

std::vector<double> grid_of(const ExperimentConfig& c) {
  return c.eps_grid.empty() ? default_eps_grid() : c.eps_grid;
}

std::vector<std::size_t> sizes_of(const ExperimentConfig& c) {
  return c.N_list.empty() ? std::vector<std::size_t>{c.N} : c.N_list;
}

RunArtifacts from_report(const ExperimentConfig& c, const ExperimentReport& report) {
  RunArtifacts out;
  SamplesCsv csv(std::string(to_string(c.experiment)));
  csv.records(report.records);
  out.samples_csv = csv.str();
  out.summary = to_json(report);
  out.summary["config"] = result_echo(c);
  return out;
}

RunArtifacts run_square(const ExperimentConfig& c) {
  const EnsembleSpec spec = ensemble(c, c.N, c.N);
  if (c.N_list.empty()) return from_report(c, square_sv_experiment(spec, c.N, c.trials, c.seed, c.workers));
  return from_report(c, square_sv_trend(spec, c.N_list, c.trials, c.seed, c.workers));
}

RunArtifacts run_berry_esseen(const ExperimentConfig& c) {
  const std::vector<double> grid = grid_of(c);
  SamplesCsv csv("berry-esseen");
  json rows = json::array();
  double first = 0.0;
  for (std::size_t n : sizes_of(c)) {
    const BerryEsseenResult r =
        berry_esseen_discrepancy(ensemble(c, n, n), n, c.trials, grid, c.seed, c.params, c.workers);
    for (std::size_t i = 0; i < r.abs_sums.size(); ++i) {
      csv.row(n, n - 1, r.kept_trials[i], "abs_S", r.abs_sums[i], c.seed);
    }
    if (rows.empty()) first = r.discrepancy;
    rows.push_back({{"N", n},
                    {"samples", r.samples},
                    {"skipped", r.skipped},
                    {"D", r.discrepancy},
                    {"band", r.band},
                    {"ratio_to_first", first > 0.0 ? r.discrepancy / first : 0.0},
                    {"incompressible_fraction", r.incompressible_fraction}});
  }
  RunArtifacts out;
  out.samples_csv = csv.str();
  out.summary = {{"experiment", "berry-esseen"}, {"config", result_echo(c)}, {"trend", rows}};
  return out;
}

RunArtifacts run_ric_exact(const ExperimentConfig& c) {
  const Matrix a = sample_matrix(ensemble(c, c.rows(), c.N), c.seed, 0);
  const RicReport report = exact_ric(a, c.s, c.budget, c.workers);
  SamplesCsv csv("ric-exact");
  csv.row(c.N, c.rows(), 0, "delta_s", report.delta, c.seed);
  RunArtifacts out;
  out.samples_csv = csv.str();
  out.summary = to_json(report);
  out.summary["experiment"] = "ric-exact";
  out.summary["config"] = result_echo(c);
  out.extra_files.emplace_back("ric-exact_ric.json", to_json(report).dump(2) + "\n");
  return out;
}

RunArtifacts run_ric_prop1(const ExperimentConfig& c) {
  const std::vector<std::size_t> ns = c.n_list.empty() ? std::vector<std::size_t>{c.rows()} : c.n_list;
  SamplesCsv csv("ric-prop1");
  json rows = json::array();
  for (std::size_t n : ns) {
    const PropositionResult r = ric_proposition_experiment(n, c.N, c.s, c.delta, c.trials, c.seed, c.budget,
                                                           c.random_supports, c.workers);
    for (std::size_t t = 0; t < r.deltas.size(); ++t) csv.row(c.N, n, t, "delta_s", r.deltas[t], c.seed);
    const Interval ci = wilson_interval(r.successes, r.trials);
    rows.push_back({{"n", n},
                    {"trials", r.trials},
                    {"successes", r.successes},
                    {"success_fraction", r.success_fraction()},
                    {"standard_error", r.standard_error()},
                    {"wilson_lower", ci.lower},
                    {"wilson_upper", ci.upper},
                    {"method", std::string(to_string(r.method))}});
  }
  RunArtifacts out;
  out.samples_csv = csv.str();
  out.summary = {{"experiment", "ric-prop1"}, {"config", result_echo(c)}, {"trend", rows}};
  return out;
}

RunArtifacts run_sparse_min(const ExperimentConfig& c) {
  const Matrix a = sample_matrix(ensemble(c, c.rows(), c.N), c.seed, 0);
  const SparseMinimum m = sparse_minimum(a, c.s, c.budget, c.random_supports, c.seed);
  SamplesCsv csv("sparse-min");
  csv.row(c.N, c.rows(), 0, "sparse_min", m.value, c.seed);
  RunArtifacts out;
  out.samples_csv = csv.str();
  out.summary = {{"experiment", "sparse-min"},
                 {"config", result_echo(c)},
                 {"value", m.value},
                 {"support", std::vector<std::size_t>(m.support.indices().begin(), m.support.indices().end())},
                 {"method", std::string(to_string(m.method))},
                 {"supports_evaluated", m.supports_evaluated},
                 {"certified", m.exact()},
                 {"matrix_checksum", a.checksum_hex()}};
  return out;
}

RunArtifacts run_net_bounds(const ExperimentConfig& c) {
  const bool sphere = c.s == 0 || c.s >= c.N;
  json bounds;
  CertifiedNet built;
  if (sphere) {
    bounds = {{"log_full", static_cast<double>(c.N) * std::log(3.0 / c.eps)}};
    built = certified_sphere_net(c.N, c.eps, c.seed, c.samples);
  } else {
    if (2 * c.s > c.N) throw ConfigError("sparse nets need s <= N/2 (or s = 0 for the full sphere)");
    const CoveringBounds b = covering_bounds(c.N, c.s, c.eps);
    bounds = {{"log_full", b.log_full},
              {"log_sparse", b.log_sparse},
              {"log_binomial", b.log_binomial},
              {"log_binom_bound", b.log_binom_bound}};
    built = certified_sparse_sphere_net(c.N, c.s, c.eps, c.seed, c.samples);
  }
  SamplesCsv csv("net-bounds");
  csv.row(c.N, c.s, 0, "net_size", static_cast<double>(built.net.size()), c.seed);
  csv.row(c.N, c.s, 0, "log_net_size", std::log(static_cast<double>(built.net.size())), c.seed);
  csv.row(c.N, c.s, 0, "coverage_worst_distance", built.certificate.worst_distance, c.seed);
  RunArtifacts out;
  out.samples_csv = csv.str();
  out.summary = {{"experiment", "net-bounds"},
                 {"config", result_echo(c)},
                 {"target", sphere ? "sphere" : "sparse-sphere"},
                 {"bounds", bounds},
                 {"net_size", built.net.size()},
                 {"min_separation", built.net.size() > 1 ? built.net.min_separation() : 0.0},
                 {"candidates", built.net.candidates},
                 {"rebuilds", built.rebuilds},
                 {"coverage",
                  {{"samples", built.certificate.samples},
                   {"uncovered", built.certificate.uncovered},
                   {"worst_distance", built.certificate.worst_distance},
                   {"passed", built.certificate.passed()}}}};
  std::ostringstream net_csv;
  write_net_csv(built.net, net_csv);
  out.extra_files.emplace_back("net-bounds_net.csv", net_csv.str());
  return out;
}

RunArtifacts run_l1_recovery(const ExperimentConfig& c) {
  const RecoveryReport r =
      recovery_experiment(ensemble(c, c.rows(), c.N), c.rows(), c.N, c.s, c.trials, c.seed, c.workers);
  SamplesCsv csv("l1-recovery");
  std::ostringstream rec;
  rec << "trial,s,success,rel_error,solver_iterations\n";
  std::size_t budget_failures = 0, ties = 0;
  for (const auto& x : r.records) {
    csv.row(c.N, c.rows(), x.trial, "rel_error", x.rel_error, c.seed);
    rec << x.trial << ',' << x.s << ',' << (x.success ? 1 : 0) << ',' << format_double(x.rel_error) << ','
        << x.iterations << '\n';
    budget_failures += x.budget_exceeded;
    ties += x.l1_tie;
  }
  const Interval ci = wilson_interval(r.successes, std::max<std::size_t>(r.trials, 1));
  RunArtifacts out;
  out.samples_csv = csv.str();
  out.summary = {{"experiment", "l1-recovery"},
                 {"config", result_echo(c)},
                 {"trials", r.trials},
                 {"successes", r.successes},
                 {"success_fraction", r.success_fraction()},
                 {"wilson_lower", ci.lower},
                 {"wilson_upper", ci.upper},
                 {"solver_budget_failures", budget_failures},
                 {"l1_ties", ties}};
  if (c.certified_check) {
    const Matrix a = sample_matrix(r.spec, c.seed, 0);
    const CertifiedRecoveryReport cr =
        certified_recovery_check(a, std::max<std::size_t>(c.s, 1), kMinCertifiedInstances, c.seed, c.budget);
    out.summary["certified_check"] = {{"status", std::string(to_string(cr.certificate.status))},
                                      {"delta_2s", cr.certificate.delta},
                                      {"instances", cr.instances},
                                      {"failures", cr.failures},
                                      {"ties", cr.ties}};
  }
  out.extra_files.emplace_back("l1-recovery_recovery.csv", rec.str());
  return out;
}

RunArtifacts run_decomposition(const ExperimentConfig& c) {
  const std::size_t n = c.N;
  const Matrix a = sample_matrix(ensemble(c, n, n), c.seed, 0);
  const CompressibleBound bound = compressible_lower_bound(a, c.params, c.budget, c.random_supports, c.seed);
  const BoundValidation validation = validate_compressible_bound(a, c.params, bound.bound, c.samples, c.seed);
  const WitnessReport witness =
      incompressible_minimum_witness(a, c.params, std::max(c.samples, kMinWitnessSamples), c.seed);

  SamplesCsv csv("decomposition");
  std::size_t chain_failures = 0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    Rng rng = Rng::stream(c.seed, t, StreamTag::Misc);
    const Vector x = random_unit_vector(n, rng);
    const auto k = static_cast<std::size_t>(rng.below(n));
    const ChainWitness w = geometric_chain_check(a, x, k);
    chain_failures += !w.passed;
    const double scale = w.norm_ax + w.scaled_dist;
    csv.row(n, n, t, "chain_relative_defect", scale > 0.0 ? std::abs(w.dist_ax - w.scaled_dist) / scale : 0.0,
            c.seed);
  }
  RunArtifacts out;
  out.samples_csv = csv.str();
  out.summary = {
      {"experiment", "decomposition"},
      {"config", result_echo(c)},
      {"compressible",
       {{"sparse_minimum", bound.sparse.value},
        {"sparse_method", std::string(to_string(bound.sparse.method))},
        {"largest_singular_value", bound.largest_singular_value},
        {"bound", bound.bound},
        {"certified", bound.certified()},
        {"validation_samples", validation.samples},
        {"validation_violations", validation.violations},
        {"validation_min_norm", validation.min_norm}}},
      {"incompressible",
       {{"samples", witness.samples},
        {"violations", witness.violations},
        {"min_sqrtN_norm", witness.min_scaled_norm},
        {"min_witness", witness.min_witness}}},
      {"chain", {{"checks", c.trials}, {"failures", chain_failures}}},
      {"matrix_checksum", a.checksum_hex()}};
  return out;
}

void render(const json& j, const std::string& indent, std::ostringstream& out) {
  for (const auto& item : j.items()) {
    const json& v = item.value();
    if (v.is_object()) {
      out << indent << item.key() << ":\n";
      render(v, indent + "  ", out);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << indent << item.key() << ":\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out << indent << "  [" << i << "]\n";
        render(v[i], indent + "    ", out);
      }
    } else if (v.is_number_float()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.10g", v.get<double>());
      out << indent << item.key() << ": " << buf << '\n';
    } else {
      out << indent << item.key() << ": " << v.dump() << '\n';
    }
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << contents;
  if (!f) throw Error("failed writing " + path.string());
}

}  // namespace

RunArtifacts execute(const ExperimentConfig& c) {
  c.validate();
  RunArtifacts out;
  switch (c.experiment) {
    case ExperimentKind::SquareSv: out = run_square(c); break;
    case ExperimentKind::RectSv:
      out = from_report(c, rectangular_sv_experiment(ensemble(c, c.N, c.n), c.N, c.n, c.trials, c.seed, c.workers));
      break;
    case ExperimentKind::TailCurve: {
      const std::vector<double> grid = grid_of(c);
      out = from_report(c, tail_curve(ensemble(c, c.N, c.N), c.N, c.trials, grid, c.seed, c.workers));
      break;
    }
    case ExperimentKind::HyperplaneDist:
      out = from_report(c, hyperplane_distance_experiment(ensemble(c, c.N, c.N), c.N, c.trials, c.seed, c.workers));
      break;
    case ExperimentKind::BerryEsseen: out = run_berry_esseen(c); break;
    case ExperimentKind::RicExact: out = run_ric_exact(c); break;
    case ExperimentKind::RicProp1: out = run_ric_prop1(c); break;
    case ExperimentKind::SparseMin: out = run_sparse_min(c); break;
    case ExperimentKind::NetBounds: out = run_net_bounds(c); break;
    case ExperimentKind::L1Recovery: out = run_l1_recovery(c); break;
    case ExperimentKind::Decomposition: out = run_decomposition(c); break;
  }
  out.text = render_text(out.summary);
  return out;
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const InconsistencyError*>(&e)) return kExitInconsistency;
  if (dynamic_cast<const BudgetError*>(&e)) return kExitBudget;
  if (dynamic_cast<const DomainError*>(&e)) return kExitInvalidConfig;
  return kExitInternal;
}

json error_record(const std::exception& e) {
  const int code = exit_code_for(e);
  const char* kind = "internal";
  if (code == kExitInvalidConfig) kind = "invalid-config";
  if (code == kExitBudget) kind = dynamic_cast<const ConvergenceError*>(&e) ? "convergence" : "budget-exceeded";
  if (code == kExitInconsistency) kind = "inconsistency";
  return {{"error", kind}, {"exit_code", code}, {"message", e.what()}};
}

std::string resolve_output_dir(const ExperimentConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return ".";
}

std::string render_text(const json& summary) {
  std::ostringstream out;
  render(summary, "", out);
  return out.str();
}

int run(const ExperimentConfig& config, std::ostream& err) {
  const std::filesystem::path dir = resolve_output_dir(config);
  try {
    const RunArtifacts a = execute(config);
    std::filesystem::create_directories(dir);
    const std::string stem(to_string(config.experiment));
    const bool csv = config.format != OutputFormat::Json;
    const bool json_out = config.format != OutputFormat::Csv;
    if (csv) write_file(dir / (stem + "_samples.csv"), a.samples_csv);
    if (json_out) write_file(dir / (stem + "_summary.json"), a.summary.dump(2) + "\n");
    write_file(dir / (stem + "_summary.txt"), a.text);
    for (const auto& [name, contents] : a.extra_files) {
      const bool is_json = name.size() > 5 && name.compare(name.size() - 5, 5, ".json") == 0;
      if (is_json ? json_out : csv) write_file(dir / name, contents);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    const json record = error_record(e);
    err << record.dump() << '\n';
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!ec) {
      std::ofstream f(dir / "error.json", std::ios::binary | std::ios::trunc);
      if (f) f << record.dump(2) << '\n';
    }
    return record["exit_code"].get<int>();
  }
}

}  // namespace sparsinv
