#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace sld::cli {
namespace {

// Keys that only affect presentation or scheduling, not the numbers.
const std::set<std::string> kUnhashed = {"out", "json", "csv-row", "workers"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < -1000000000LL || v > 1000000000LL) throw ConfigError("'" + key + "' is out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void merge_layer(KeyValues& base, const KeyValues& layer, const std::string& origin) {
  if (layer.count("power") && layer.count("power-db")) {
    throw ConfigError(origin + ": set either 'power' or 'power-db', not both");
  }
  for (const auto& [k, v] : layer) {
    if (k == "power") base.erase("power-db");
    if (k == "power-db") base.erase("power");
    base[k] = v;
  }
}

void check_known(const KeyValues& kv, const std::string& origin) {
  const auto& keys = known_keys();
  for (const auto& [k, v] : kv) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ConfigError(origin + ": unknown key '" + k + "'");
    }
  }
}

std::vector<std::string> axis_variables(const std::string& experiment) {
  if (experiment == "outage") return {"rate"};
  if (experiment == "throughput") return {"power", "sigma", "epsilon", "b1", "b2", "n", "delta", "noise"};
  if (experiment == "fig1" || experiment == "fig3" || experiment == "fig4") return {"power"};
  if (experiment == "surface") return {"sigma"};
  return {};
}

}  // namespace

std::string normalize_key(std::string_view key) {
  std::string out = trim(key);
  for (auto& c : out) {
    c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "n",          "power",        "power-db",     "noise",       "sigma",       "epsilon",
      "b1",         "b2",           "delta",        "eve-variance", "gain2",      "seed",
      "draws",      "workers",      "source",       "iterations",  "cgi",         "phi",
      "phi-points", "total-bits",   "fraction",     "b1-max",      "sweep-var",   "sweep-start",
      "sweep-stop", "sweep-points", "sweep-scale",  "sigma-list",  "epsilon-list", "n-list",
      "b1-list",    "out",          "json",         "csv-row"};
  return keys;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "design", "outage", "throughput", "table1", "fig1",          "fig2",      "fig3",
      "fig4",   "surface", "fig5",      "fig6",   "sweep-tau", "bits-for-fraction", "montecarlo"};
  return names;
}

KeyValues parse_config_text(std::string_view text, const std::string& origin) {
  KeyValues kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = normalize_key(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (kv.count(key)) throw ConfigError(where + ": '" + key + "' set twice");
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    kv[key] = value;
  }
  return kv;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::vector<double> Axis::values() const {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
    v.push_back(scale == Scale::log ? start * std::pow(stop / start, t) : start + (stop - start) * t);
  }
  return v;
}

SimConfig ExperimentConfig::sim() const {
  SimConfig s;
  s.params = params;
  s.draws = draws;
  s.seed = seed;
  s.source = source;
  s.workers = workers;
  s.grassmannian_iterations = codebook_iterations;
  return s;
}

KeyValues experiment_defaults(const std::string& experiment) {
  KeyValues kv = {{"b2", "5"}};
  const auto set = [&](std::initializer_list<std::pair<const char*, const char*>> items) {
    for (const auto& [k, v] : items) kv[k] = v;
  };
  if (experiment == "outage") {
    set({{"sweep-var", "rate"}, {"sweep-start", "0"}, {"sweep-stop", "6"}, {"sweep-points", "25"},
         {"sweep-scale", "linear"}});
  } else if (experiment == "throughput") {
    set({{"sweep-var", "power"}, {"sweep-start", "1"}, {"sweep-stop", "100"}, {"sweep-points", "21"},
         {"sweep-scale", "log"}});
  } else if (experiment == "fig1") {
    set({{"n", "2"}, {"b1", "6"}, {"epsilon", "0.05"}, {"gain2", "4"}, {"source", "grassmannian"},
         {"sigma-list", "0.01,0.1"}, {"sweep-var", "power"}, {"sweep-start", "0.1"}, {"sweep-stop", "100"},
         {"sweep-points", "13"}, {"sweep-scale", "log"}});
  } else if (experiment == "fig2") {
    set({{"n", "4"}, {"power", "100"}, {"epsilon", "0.01"}, {"gain2", "4"}, {"sigma-list", "0.05,0.1,0.2"},
         {"b1-max", "30"}});
  } else if (experiment == "fig3") {
    set({{"n", "4"}, {"sigma", "0.1"}, {"epsilon", "0.01"}, {"gain2", "4"}, {"b1-list", "8,10,12"},
         {"sweep-var", "power"}, {"sweep-start", "1"}, {"sweep-stop", "10000"}, {"sweep-points", "25"},
         {"sweep-scale", "log"}});
  } else if (experiment == "fig4") {
    set({{"n", "4"}, {"b1", "10"}, {"sigma", "0.05"}, {"epsilon", "0.02"}, {"delta", "1e-4"},
         {"sweep-var", "power"}, {"sweep-start", "1"}, {"sweep-stop", "100"}, {"sweep-points", "21"},
         {"sweep-scale", "log"}});
  } else if (experiment == "surface") {
    set({{"n", "4"}, {"power", "10"}, {"b1", "8"}, {"epsilon-list", "0.001,0.003,0.009,0.02,0.033,0.05,0.1"},
         {"sweep-var", "sigma"}, {"sweep-start", "0"}, {"sweep-stop", "0.99"}, {"sweep-points", "100"},
         {"sweep-scale", "linear"}});
  } else if (experiment == "fig5") {
    set({{"power", "10"}, {"total-bits", "40"}, {"sigma", "0.05"}, {"delta", "1e-4"}, {"n-list", "2,3,4"},
         {"epsilon-list", "0.001,0.002,0.005,0.01,0.02,0.05,0.1"}});
  } else if (experiment == "sweep-tau") {
    set({{"n", "4"}, {"power", "10"}, {"total-bits", "40"}, {"sigma", "0.05"}, {"epsilon", "0.01"},
         {"delta", "1e-4"}});
  } else if (experiment == "fig6") {
    set({{"power", "20"}, {"sigma", "0.03"}, {"delta", "1e-4"}, {"fraction", "0.9"}, {"n-list", "2,4"},
         {"epsilon-list", "0.001,0.002,0.005,0.01,0.02,0.05,0.1,0.2,0.5,0.8,1"}});
  } else if (experiment == "bits-for-fraction") {
    set({{"power", "20"}, {"sigma", "0.03"}, {"delta", "1e-4"}, {"fraction", "0.9"}});
  }
  return kv;
}

ExperimentConfig build_config(const std::string& experiment, const KeyValues& file, const KeyValues& flags) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end()) {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  check_known(file, "config file");
  check_known(flags, "command line");

  KeyValues kv;
  merge_layer(kv, experiment_defaults(experiment), "defaults");
  merge_layer(kv, file, "config file");
  merge_layer(kv, flags, "command line");

  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.effective = kv;
  auto& p = cfg.params;
  for (const auto& [k, v] : kv) {
    if (k == "n") p.antennas = to_int(k, v);
    else if (k == "power") p.power = to_double(k, v);
    else if (k == "power-db") p.power = std::pow(10.0, to_double(k, v) / 10.0);
    else if (k == "noise") p.noise_power = to_double(k, v);
    else if (k == "sigma") p.connection_outage = to_double(k, v);
    else if (k == "epsilon") p.secrecy_outage = to_double(k, v);
    else if (k == "b1") p.cdi_bits = to_int(k, v);
    else if (k == "b2") p.cgi_bits = to_int(k, v);
    else if (k == "delta") p.truncation_mass = to_double(k, v);
    else if (k == "eve-variance") p.eve_variance = to_double(k, v);
    else if (k == "gain2") cfg.gain2 = to_double(k, v);
    else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(to_integer(k, v));
    else if (k == "draws") {
      const long long d = to_integer(k, v);
      if (d < 0) throw ConfigError("'draws' must be >= 0");
      cfg.draws = static_cast<std::uint64_t>(d);
    } else if (k == "workers") cfg.workers = to_int(k, v);
    else if (k == "iterations") cfg.codebook_iterations = to_int(k, v);
    else if (k == "source") {
      if (v == "qca" || v == "qca-synthetic" || v == "qca_synthetic") cfg.source = CodebookSource::qca_synthetic;
      else if (v == "rvq") cfg.source = CodebookSource::rvq;
      else if (v == "grassmannian") cfg.source = CodebookSource::grassmannian;
      else throw ConfigError("'source' must be qca, rvq or grassmannian, got '" + v + "'");
    } else if (k == "cgi") {
      if (v == "exact") cfg.cgi = CgiScheme::exact;
      else if (v == "one-bit" || v == "one_bit") cfg.cgi = CgiScheme::one_bit;
      else if (v == "equalized") cfg.cgi = CgiScheme::equalized;
      else throw ConfigError("'cgi' must be exact, one-bit or equalized, got '" + v + "'");
    } else if (k == "phi") cfg.phi = to_double(k, v);
    else if (k == "phi-points") cfg.phi_points = to_int(k, v);
    else if (k == "total-bits") cfg.total_bits = to_int(k, v);
    else if (k == "fraction") cfg.fraction = to_double(k, v);
    else if (k == "b1-max") cfg.b1_max = to_int(k, v);
    else if (k == "sweep-var") cfg.axis.variable = v;
    else if (k == "sweep-start") cfg.axis.start = to_double(k, v);
    else if (k == "sweep-stop") cfg.axis.stop = to_double(k, v);
    else if (k == "sweep-points") cfg.axis.points = to_int(k, v);
    else if (k == "sweep-scale") {
      if (v == "log") cfg.axis.scale = Scale::log;
      else if (v == "linear") cfg.axis.scale = Scale::linear;
      else throw ConfigError("'sweep-scale' must be log or linear, got '" + v + "'");
    } else if (k == "sigma-list") {
      for (const auto& s : split_list(v)) cfg.sigma_list.push_back(to_double(k, s));
    } else if (k == "epsilon-list") {
      for (const auto& s : split_list(v)) cfg.epsilon_list.push_back(to_double(k, s));
    } else if (k == "n-list") {
      for (const auto& s : split_list(v)) cfg.n_list.push_back(to_int(k, s));
    } else if (k == "b1-list") {
      for (const auto& s : split_list(v)) cfg.b1_list.push_back(to_int(k, s));
    } else if (k == "out") cfg.out = v;
    else if (k == "json") cfg.json = to_bool(k, v);
    else if (k == "csv-row") cfg.csv_row = to_bool(k, v);
  }

  p.validate();
  if (!(cfg.gain2 >= 0.0) || !std::isfinite(cfg.gain2)) throw ConfigError("'gain2' must be finite and >= 0");
  if (cfg.workers < 1) throw ConfigError("'workers' must be >= 1");
  if (cfg.codebook_iterations < 1) throw ConfigError("'iterations' must be >= 1");
  if (cfg.phi_points < 1) throw ConfigError("'phi-points' must be >= 1");
  if (cfg.total_bits < 2) throw ConfigError("'total-bits' must be >= 2");
  if (cfg.json && cfg.csv_row) throw ConfigError("choose one of --json and --csv-row");

  const auto allowed = axis_variables(experiment);
  if (allowed.empty()) {
    if (kv.count("sweep-var")) throw ConfigError("experiment '" + experiment + "' has no sweep axis");
  } else {
    if (std::find(allowed.begin(), allowed.end(), cfg.axis.variable) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError("'sweep-var' for " + experiment + " must be one of: " + list);
    }
    if (cfg.axis.points < 1) throw ConfigError("'sweep-points' must be >= 1");
    if (cfg.axis.scale == Scale::log && !(cfg.axis.start > 0.0 && cfg.axis.stop > 0.0)) {
      throw ConfigError("a log sweep needs positive 'sweep-start' and 'sweep-stop'");
    }
    if (!(cfg.axis.start <= cfg.axis.stop)) throw ConfigError("'sweep-start' must not exceed 'sweep-stop'");
  }
  return cfg;
}

std::string canonical_text(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (kUnhashed.count(k)) continue;
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_text(cfg.effective))));
  return buf;
}

ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& variable, double value) {
  ExperimentConfig c = cfg;
  auto& p = c.params;
  const auto as_int = [&](const char* name) {
    const double r = std::round(value);
    if (std::abs(r - value) > 1e-9) throw ConfigError(std::string("'") + name + "' sweep needs integer values");
    return static_cast<int>(r);
  };
  if (variable == "power") p.power = value;
  else if (variable == "sigma") p.connection_outage = value;
  else if (variable == "epsilon") p.secrecy_outage = value;
  else if (variable == "b1") p.cdi_bits = as_int("b1");
  else if (variable == "b2") p.cgi_bits = as_int("b2");
  else if (variable == "n") p.antennas = as_int("n");
  else if (variable == "delta") p.truncation_mass = value;
  else if (variable == "noise") p.noise_power = value;
  else if (variable == "gain2") c.gain2 = value;
  else throw ConfigError("cannot sweep '" + variable + "'");
  p.validate();
  return c;
}

}  // namespace sld::cli
