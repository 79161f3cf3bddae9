#include "sparsinv/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "sparsinv/errors.hpp"

namespace sparsinv {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 11> kExperimentNames{{
    {ExperimentKind::SquareSv, "square-sv"},
    {ExperimentKind::RectSv, "rect-sv"},
    {ExperimentKind::TailCurve, "tail-curve"},
    {ExperimentKind::RicExact, "ric-exact"},
    {ExperimentKind::RicProp1, "ric-prop1"},
    {ExperimentKind::SparseMin, "sparse-min"},
    {ExperimentKind::HyperplaneDist, "hyperplane-dist"},
    {ExperimentKind::BerryEsseen, "berry-esseen"},
    {ExperimentKind::NetBounds, "net-bounds"},
    {ExperimentKind::L1Recovery, "l1-recovery"},
    {ExperimentKind::Decomposition, "decomposition"},
}};

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto k : allowed) known = known || item.key() == k;
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

std::uint64_t read_unsigned(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) throw ConfigError("'" + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

double read_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

std::string read_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

template <typename T, typename Read>
std::vector<T> read_list(const json& v, const std::string& key, Read read) {
  if (!v.is_array()) throw ConfigError("'" + key + "' must be an array");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(static_cast<T>(read(e, key)));
  return out;
}

template <typename Fn>
auto as_config_error(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::string_view to_string(ExperimentKind k) noexcept {
  for (const auto& [kind, name] : kExperimentNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (const auto& [kind, n] : kExperimentNames) {
    if (n == name) return kind;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::string_view to_string(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
  }
  return "both";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "both") return OutputFormat::Both;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  as_config_error([&] {
    params.validate();
    return 0;
  });
  if (N == 0) throw ConfigError("N must be positive");
  if (trials == 0) throw ConfigError("trials must be positive");
  for (std::size_t v : N_list) {
    if (v == 0) throw ConfigError("N_list entries must be positive");
  }
  for (std::size_t v : n_list) {
    if (v == 0) throw ConfigError("n_list entries must be positive");
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] >= 0.0 && eps_grid[i] <= 2.0)) throw ConfigError("eps_grid values must lie in [0, 2]");
    if (i > 0 && eps_grid[i] < eps_grid[i - 1]) throw ConfigError("eps_grid must be sorted");
  }
  if (!std::isfinite(eps) || !std::isfinite(delta)) throw ConfigError("eps and delta must be finite");
  switch (experiment) {
    case ExperimentKind::RectSv:
      if (n == 0 || n > N) throw ConfigError("rect-sv needs 1 <= n <= N");
      break;
    case ExperimentKind::RicExact:
    case ExperimentKind::SparseMin:
      if (s == 0 || s > N) throw ConfigError("needs 1 <= s <= N");
      break;
    case ExperimentKind::RicProp1:
      if (s == 0 || s > N) throw ConfigError("needs 1 <= s <= N");
      if (!(delta > 0.0)) throw ConfigError("delta must be positive");
      break;
    case ExperimentKind::NetBounds:
      if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("net-bounds needs eps in (0, 1)");
      break;
    case ExperimentKind::L1Recovery:
      if (rows() > N) throw ConfigError("l1-recovery needs n <= N");
      if (s > N) throw ConfigError("l1-recovery needs s <= N");
      break;
    case ExperimentKind::HyperplaneDist:
    case ExperimentKind::BerryEsseen:
      if (N < 2 && N_list.empty()) throw ConfigError("needs N >= 2");
      break;
    default:
      break;
  }
}

ExperimentConfig parse_config(const json& j) {
  require_object(j, "config");
  reject_unknown(j,
                 {"experiment", "ensemble", "dims", "params", "eps", "eps_grid", "delta", "trials", "seed", "workers",
                  "budget", "random_supports", "samples", "certified_check", "output"},
                 "config");
  if (!j.contains("experiment")) throw ConfigError("missing key 'experiment'");
  ExperimentConfig c;
  c.experiment = parse_experiment(read_string(j["experiment"], "experiment"));

  if (j.contains("ensemble")) {
    const json& e = j["ensemble"];
    require_object(e, "ensemble");
    reject_unknown(e, {"distribution", "normalization"}, "ensemble");
    as_config_error([&] {
      if (e.contains("distribution")) c.distribution = parse_distribution(read_string(e["distribution"], "distribution"));
      if (e.contains("normalization")) {
        c.normalization = parse_normalization(read_string(e["normalization"], "normalization"));
      }
      return 0;
    });
  }
  if (j.contains("dims")) {
    const json& d = j["dims"];
    require_object(d, "dims");
    reject_unknown(d, {"N", "n", "s", "N_list", "n_list"}, "dims");
    if (d.contains("N")) c.N = read_unsigned(d["N"], "N");
    if (d.contains("n")) c.n = read_unsigned(d["n"], "n");
    if (d.contains("s")) c.s = read_unsigned(d["s"], "s");
    if (d.contains("N_list")) c.N_list = read_list<std::size_t>(d["N_list"], "N_list", read_unsigned);
    if (d.contains("n_list")) c.n_list = read_list<std::size_t>(d["n_list"], "n_list", read_unsigned);
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    require_object(p, "params");
    reject_unknown(p, {"sparsity_fraction", "compressibility_radius", "spread_level", "spread_fraction"}, "params");
    if (p.contains("sparsity_fraction")) c.params.sparsity_fraction = read_double(p["sparsity_fraction"], "sparsity_fraction");
    if (p.contains("compressibility_radius")) {
      c.params.compressibility_radius = read_double(p["compressibility_radius"], "compressibility_radius");
    }
    // Changing c0 or c' without giving (nu, rho) re-derives them.
    if (!p.contains("spread_level") || !p.contains("spread_fraction")) {
      const SpreadConstants d = as_config_error(
          [&] { return derived_spread_constants(c.params.sparsity_fraction, c.params.compressibility_radius); });
      c.params.spread_level = d.level;
      c.params.spread_fraction = d.fraction;
    }
    if (p.contains("spread_level")) c.params.spread_level = read_double(p["spread_level"], "spread_level");
    if (p.contains("spread_fraction")) c.params.spread_fraction = read_double(p["spread_fraction"], "spread_fraction");
  }
  if (j.contains("eps")) c.eps = read_double(j["eps"], "eps");
  if (j.contains("eps_grid")) c.eps_grid = read_list<double>(j["eps_grid"], "eps_grid", read_double);
  if (j.contains("delta")) c.delta = read_double(j["delta"], "delta");
  if (j.contains("trials")) c.trials = read_unsigned(j["trials"], "trials");
  if (j.contains("seed")) c.seed = Seed{read_unsigned(j["seed"], "seed")};
  if (j.contains("workers")) c.workers = static_cast<unsigned>(read_unsigned(j["workers"], "workers"));
  if (j.contains("budget")) c.budget = read_unsigned(j["budget"], "budget");
  if (j.contains("random_supports")) c.random_supports = read_unsigned(j["random_supports"], "random_supports");
  if (j.contains("samples")) c.samples = read_unsigned(j["samples"], "samples");
  if (j.contains("certified_check")) {
    if (!j["certified_check"].is_boolean()) throw ConfigError("'certified_check' must be a boolean");
    c.certified_check = j["certified_check"].get<bool>();
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    require_object(o, "output");
    reject_unknown(o, {"dir", "format"}, "output");
    if (o.contains("dir")) c.output_dir = read_string(o["dir"], "dir");
    if (o.contains("format")) c.format = parse_format(read_string(o["format"], "format"));
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json result_echo(const ExperimentConfig& c) {
  json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["ensemble"] = {{"distribution", std::string(to_string(c.distribution))},
                   {"normalization", std::string(to_string(c.normalization))}};
  j["dims"] = {{"N", c.N}, {"n", c.n}, {"s", c.s}, {"N_list", c.N_list}, {"n_list", c.n_list}};
  j["params"] = {{"sparsity_fraction", c.params.sparsity_fraction},
                 {"compressibility_radius", c.params.compressibility_radius},
                 {"spread_level", c.params.spread_level},
                 {"spread_fraction", c.params.spread_fraction}};
  j["eps"] = c.eps;
  j["eps_grid"] = c.eps_grid;
  j["delta"] = c.delta;
  j["trials"] = c.trials;
  j["seed"] = c.seed.value;
  j["budget"] = c.budget;
  j["random_supports"] = c.random_supports;
  j["samples"] = c.samples;
  j["certified_check"] = c.certified_check;
  return j;
}

json to_json(const ExperimentConfig& c) {
  json j = result_echo(c);
  j["workers"] = c.workers;
  j["output"] = {{"dir", c.output_dir}, {"format", std::string(to_string(c.format))}};
  return j;
}

}  // namespace sparsinv
