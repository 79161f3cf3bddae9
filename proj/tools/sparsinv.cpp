#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sparsinv/config.hpp"
#include "sparsinv/errors.hpp"
#include "sparsinv/runner.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> experiment;
  std::optional<std::size_t> big_n;
  std::optional<std::size_t> n;
  std::optional<std::size_t> s;
  std::optional<double> eps;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::string> format;
};

sparsinv::ExperimentConfig build_config(const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  sparsinv::ExperimentConfig base;
  if (o.config) {
    base = sparsinv::load_config(*o.config);
    j = sparsinv::to_json(base);
  } else if (!o.experiment) {
    throw sparsinv::ConfigError("either --config or --experiment is required");
  }
  if (o.experiment) j["experiment"] = *o.experiment;
  if (o.big_n) j["dims"]["N"] = *o.big_n;
  if (o.n) j["dims"]["n"] = *o.n;
  if (o.s) j["dims"]["s"] = *o.s;
  if (o.eps) j["eps"] = *o.eps;
  if (o.trials) j["trials"] = *o.trials;
  if (o.seed) j["seed"] = *o.seed;
  if (o.workers) j["workers"] = *o.workers;
  if (o.out) j["output"]["dir"] = *o.out;
  if (o.format) j["output"]["format"] = *o.format;
  return sparsinv::parse_config(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix invertibility and sparse-recovery experiments"};
  Overrides o;
  app.add_option("--config", o.config, "JSON experiment configuration");
  app.add_option("--experiment", o.experiment,
                 "square-sv, rect-sv, tail-curve, ric-exact, ric-prop1, sparse-min, hyperplane-dist, "
                 "berry-esseen, net-bounds, l1-recovery, decomposition");
  app.add_option("--N", o.big_n, "ambient dimension N");
  app.add_option("--n", o.n, "second dimension n (rows of A where it is n x N)");
  app.add_option("--s", o.s, "sparsity");
  app.add_option("--eps", o.eps, "epsilon");
  app.add_option("--trials", o.trials, "Monte Carlo trials");
  app.add_option("--seed", o.seed, "base seed");
  app.add_option("--out", o.out, std::string("output directory (default: $") + sparsinv::kOutputDirEnv + " or .)");
  app.add_option("--workers", o.workers, "worker threads (0 = all cores); never affects output");
  app.add_option("--format", o.format, "csv, json or both");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sparsinv::kExitInvalidConfig;
  }

  sparsinv::ExperimentConfig config;
  try {
    config = build_config(o);
  } catch (const std::exception& e) {
    std::cerr << sparsinv::error_record(e).dump() << '\n';
    return sparsinv::exit_code_for(e);
  }
  const int code = sparsinv::run(config, std::cerr);
  if (code == sparsinv::kExitOk) {
    std::cout << "wrote " << sparsinv::to_string(config.experiment) << " results to "
              << sparsinv::resolve_output_dir(config) << '\n';
  }
  return code;
}
