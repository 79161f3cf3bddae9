#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sparsinv/config.hpp"

namespace sparsinv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitInconsistency = 4;

inline constexpr const char* kSamplesCsvHeader = "experiment,N,n,trial,statistic,value,seed";
inline constexpr const char* kOutputDirEnv = "SPARSINV_OUT";

// Everything a run produces, before anything touches the file system.
struct RunArtifacts {
  std::string samples_csv;
  nlohmann::json summary;
  std::string text;
  // Experiment-specific extra files: (file name, contents).
  std::vector<std::pair<std::string, std::string>> extra_files;
};

// Runs the experiment in memory. Throws the library's errors unchanged.
RunArtifacts execute(const ExperimentConfig& config);

// Exit code for an exception thrown by execute / parse_config.
int exit_code_for(const std::exception& e) noexcept;
// {"error": kind, "exit_code": code, "message": what}
nlohmann::json error_record(const std::exception& e);

// config.output_dir, else $SPARSINV_OUT, else ".".
std::string resolve_output_dir(const ExperimentConfig& config);

// Executes and writes <experiment>_samples.csv, <experiment>_summary.json,
// <experiment>_summary.txt and the extras into the output directory (CSV and
// JSON subject to config.format). On failure writes the error record to `err`
// and to error.json in the output directory. Returns the exit code.
int run(const ExperimentConfig& config, std::ostream& err);

// Renders a JSON summary as indented "key: value" lines.
std::string render_text(const nlohmann::json& summary);

}  // namespace sparsinv
