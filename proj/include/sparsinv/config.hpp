#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sparsinv/ensembles.hpp"
#include "sparsinv/rng.hpp"
#include "sparsinv/sparse_geometry.hpp"

namespace sparsinv {

enum class ExperimentKind {
  SquareSv,
  RectSv,
  TailCurve,
  RicExact,
  RicProp1,
  SparseMin,
  HyperplaneDist,
  BerryEsseen,
  NetBounds,
  L1Recovery,
  Decomposition,
};

std::string_view to_string(ExperimentKind k) noexcept;
// Throws ConfigError on an unknown name.
ExperimentKind parse_experiment(std::string_view name);

enum class OutputFormat { Csv, Json, Both };
std::string_view to_string(OutputFormat f) noexcept;
OutputFormat parse_format(std::string_view name);

// One run of one experiment. Serialized as a JSON object:
//
//   {
//     "experiment": "square-sv",
//     "ensemble": {"distribution": "gaussian", "normalization": "raw"},
//     "dims": {"N": 200, "n": 0, "s": 0, "N_list": [], "n_list": []},
//     "params": {"sparsity_fraction": 0.1, "compressibility_radius": 0.3,
//                "spread_level": ..., "spread_fraction": ...},
//     "eps": 0.5, "eps_grid": [], "delta": 0.5,
//     "trials": 1000, "seed": 7, "workers": 1,
//     "budget": 1000000, "random_supports": 10000, "samples": 10000,
//     "certified_check": false,
//     "output": {"dir": "", "format": "both"}
//   }
//
// Every key except "experiment" is optional on input; unknown keys at any
// level are a ConfigError. n = 0 means "same as N" where an n is needed. An
// empty eps_grid means the default 101-point grid. An empty output dir means
// the SPARSINV_OUT environment variable, else the current directory.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::SquareSv;
  Distribution distribution = Distribution::Gaussian;
  Normalization normalization = Normalization::Raw;
  std::size_t N = 100;
  std::size_t n = 0;
  std::size_t s = 1;
  std::vector<std::size_t> N_list;
  std::vector<std::size_t> n_list;
  SparsityParams params = SparsityParams::defaults();
  double eps = 0.5;
  std::vector<double> eps_grid;
  double delta = 0.5;
  std::size_t trials = 1000;
  Seed seed{7};
  unsigned workers = 1;
  std::uint64_t budget = 1'000'000;
  std::size_t random_supports = 10000;
  std::size_t samples = 10000;
  bool certified_check = false;
  std::string output_dir;
  OutputFormat format = OutputFormat::Both;

  std::size_t rows() const noexcept { return n == 0 ? N : n; }
  // Throws ConfigError when a parameter is invalid for the experiment.
  void validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Strict: unknown keys and wrongly typed values throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& config);
// Config echo for result files: everything that determines the output, so
// without workers and output location.
nlohmann::json result_echo(const ExperimentConfig& config);

}  // namespace sparsinv
