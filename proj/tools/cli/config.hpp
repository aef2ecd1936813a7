#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sld/montecarlo.hpp"
#include "sld/params.hpp"
#include "sld/throughput.hpp"

namespace sld::cli {

/// Malformed or inconsistent configuration. Exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written. Exit status 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Lower-cases a key and maps '_' to '-', so `power_db` and `power-db` agree.
std::string normalize_key(std::string_view key);

/// Parses flat `key = value` text. `#` starts a comment; blank lines are
/// skipped. Unknown keys and duplicates are rejected with the line number.
KeyValues parse_config_text(std::string_view text, const std::string& origin);

/// Throws IoError when the file cannot be opened.
KeyValues read_config_file(const std::string& path);

/// Every key accepted in a config file or as a `--key` flag.
const std::vector<std::string>& known_keys();

const std::vector<std::string>& experiment_names();

enum class Scale { linear, log };

struct Axis {
  std::string variable;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  Scale scale = Scale::linear;

  [[nodiscard]] bool empty() const { return points == 0; }
  [[nodiscard]] std::vector<double> values() const;
};

struct ExperimentConfig {
  std::string experiment;
  SystemParams params;
  double gain2 = 4.0;
  std::uint64_t seed = 42;
  std::uint64_t draws = 100000;
  int workers = 1;
  CodebookSource source = CodebookSource::qca_synthetic;
  int codebook_iterations = 4;
  CgiScheme cgi = CgiScheme::equalized;
  double phi = 0.5;
  int phi_points = 199;
  int total_bits = 40;
  double fraction = 0.9;
  int b1_max = 30;
  Axis axis;
  std::vector<double> sigma_list;
  std::vector<double> epsilon_list;
  std::vector<int> n_list;
  std::vector<int> b1_list;
  std::string out;
  bool json = false;
  bool csv_row = false;

  /// Fully layered key/value view, the input to config_hash().
  KeyValues effective;

  [[nodiscard]] SimConfig sim() const;
};

/// Built-in values for an experiment; file and flags are layered on top.
KeyValues experiment_defaults(const std::string& experiment);

/// Layers defaults < file < flags, converts and validates.
/// `power` and `power-db` are mutually exclusive within one layer; a later
/// layer setting either replaces both from earlier layers.
ExperimentConfig build_config(const std::string& experiment, const KeyValues& file, const KeyValues& flags);

/// Sorted `key=value` lines of the settings that influence results.
std::string canonical_text(const KeyValues& kv);

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lowercase hex digits of fnv1a64(canonical_text(cfg.effective)).
std::string config_hash(const ExperimentConfig& cfg);

/// Sets one swept quantity on a copy of the config.
ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& variable, double value);

}  // namespace sld::cli
