#pragma once
// Experiment drivers behind the CLI. Each subcommand produces a table plus a
// header block; rendering to CSV or JSON is separate so that tests can compare
// data sections directly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rigidlab {

const char* version();

struct ExperimentConfig {
  std::string subcommand;
  std::vector<std::string> inputs;  // matrix file paths
  std::string base;                 // named matrix, used when inputs is empty
  int p = 3;
  std::size_t rank = 1;
  int n = 2;
  int k = 1;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> samples;  // per-subcommand default when unset
  bool exhaustive = false;
  double budget = 1e10;
  std::string out;     // empty: stdout
  std::string format;  // csv | json | mat (gen only); empty: per-subcommand default
  std::string mode;    // per-subcommand meaning; empty: default
  double q = 16;
  int d = 2;
  std::optional<double> rigidity;  // --R
  double eps = 1;
  double beta = 1;
  double c = 1;
  double delta = 0;
};

inline const std::vector<std::string> kSubcommands = {"gen",         "rank",         "rigidity",     "lift",
                                                      "spectral-bound", "eigs",     "amplify-kron", "amplify-maj",
                                                      "circuit-size", "obstruction", "schedule"};

/// Parses a JSON object whose keys are ExperimentConfig field names ("R" for
/// rigidity). Unknown keys and type mismatches raise ConfigError.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

/// Throws ConfigError on any invalid or inconsistent field.
void validate(const ExperimentConfig& config);

/// Resolves the empty-format / empty-mode defaults.
std::string effective_format(const ExperimentConfig& config);
std::string effective_mode(const ExperimentConfig& config);

using Cell = std::variant<std::monostate, std::int64_t, double, bool, std::string>;

struct Artifact {
  std::vector<std::pair<std::string, std::string>> header;  // key, value
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::optional<std::string> matrix_text;  // gen with format mat
};

/// Validates and runs one experiment. Throws ConfigError, DomainError,
/// CapExceeded, or std::runtime_error for I/O.
Artifact run_experiment(const ExperimentConfig& config);

/// CSV: '#'-prefixed "key: value" header lines, a header row, data rows.
/// JSON: {"header": {...}, "rows": [{column: value}, ...]}.
/// The timestamp is the only header entry that differs between identical runs.
std::string render(const Artifact& artifact, const std::string& format, const std::string& timestamp);

/// Renders with the current UTC time and writes to config.out, or to
/// fallback when out is empty. Errors name the path.
void write_artifact(const Artifact& artifact, const ExperimentConfig& config, std::ostream& fallback);

/// Drops the timestamp line (CSV) or field (JSON) from rendered output.
std::string strip_timestamp(const std::string& rendered);

std::string format_double(double x);

}  // namespace rigidlab
