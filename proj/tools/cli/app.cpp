#include "app.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "experiments.hpp"
#include "json.hpp"
#include "sld/error.hpp"

#ifndef SLD_VERSION
#define SLD_VERSION "unknown"
#endif

namespace sld::cli {
namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json metadata(const ExperimentConfig& cfg) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [k, v] : cfg.effective) {
    if (k != "out") config[k] = v;
  }
  return {
      {"experiment", cfg.experiment},
      {"version", SLD_VERSION},
      {"csv_schema", "sld-csv v" + std::to_string(kCsvSchemaVersion)},
      {"config_hash", "fnv1a64:" + config_hash(cfg)},
      {"seed", cfg.seed},
      {"draws", cfg.draws},
      {"config", config},
      {"conventions",
       {{"power", "linear total transmit power; power-db is converted once at the command line"},
        {"perfect_feedback_baseline", "perfect CDI and exact CGI, without the (1 - sigma) factor"},
        {"quantized_cgi_rate", "each cell transmits at the rate designed for its lower edge"},
        {"empirical_secrecy_rate",
         "per power split, the largest codeword rate whose simulated connection outage is <= sigma, "
         "minus the minimum redundancy; maximized over a uniform split grid"},
        {"nan", "value not defined at that point (infeasible, or simulation disabled with draws = 0)"}}},
      {"generated_at", utc_timestamp()},
  };
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << body;
  f.flush();
  if (!f) throw IoError("failed while writing '" + path + "'");
}

void emit(const ExperimentConfig& cfg, const std::string& body, std::ostream& out) {
  if (cfg.out.empty()) {
    out << body;
    return;
  }
  write_file(cfg.out, body);
  write_file(cfg.out + ".meta.json", metadata(cfg).dump(2) + "\n");
}

std::string describe(const FeasibilityError& e) {
  const auto& rep = e.report();
  std::ostringstream os;
  os << "b1_min = " << rep.b1_min;
  if (!std::isnan(rep.mu_min)) os << ", mu_min = " << format_double(rep.mu_min);
  if (!rep.note.empty() && std::string(e.what()).find(rep.note) == std::string::npos) os << " (" << rep.note << ")";
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secure transmission design with limited feedback: experiments and design queries", "sld"};
  app.set_version_flag("--version", SLD_VERSION);

  std::string experiment;
  std::string config_path;
  std::map<std::string, std::string> values;
  bool json = false;
  bool csv_row = false;

  std::string names;
  for (const auto& n : experiment_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("experiment", experiment, "One of: " + names)->required()->check(CLI::IsMember(experiment_names()));
  app.add_option("--config", config_path, "Flat key = value file; flags override its values");
  for (const auto& key : known_keys()) {
    if (key == "json" || key == "csv-row") continue;
    app.add_option("--" + key, values[key], "Same as '" + key + "' in the config file");
  }
  auto* json_flag = app.add_flag("--json", json, "design: print JSON");
  auto* csv_flag = app.add_flag("--csv-row", csv_row, "design: print a single CSV row");
  json_flag->excludes(csv_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kInvalidConfig;
  }

  try {
    KeyValues flags;
    for (const auto& [k, v] : values) {
      if (app.count("--" + k) > 0) flags[k] = v;
    }
    if (json) flags["json"] = "true";
    if (csv_row) flags["csv-row"] = "true";
    const KeyValues file = config_path.empty() ? KeyValues{} : read_config_file(config_path);
    const auto cfg = build_config(experiment, file, flags);

    if (cfg.experiment == "design") {
      std::ostringstream body;
      const auto format = cfg.json ? DesignFormat::json : cfg.csv_row ? DesignFormat::csv_row : DesignFormat::text;
      const int rc = run_design(cfg, format, body);
      emit(cfg, body.str(), out);
      if (rc != 0) err << "sld: infeasible parameters\n";
      return rc;
    }
    if (cfg.json || cfg.csv_row) throw ConfigError("--json and --csv-row apply to the design experiment only");

    std::ostringstream body;
    write_csv(body, run_table_experiment(cfg));
    emit(cfg, body.str(), out);
    return kOk;
  } catch (const IoError& e) {
    err << "sld: I/O error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const FeasibilityError& e) {
    err << "sld: infeasible: " << e.what() << "; " << describe(e) << '\n';
    return kInfeasible;
  } catch (const UnboundedRequirementError& e) {
    err << "sld: infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ConfigError& e) {
    err << "sld: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const ParameterError& e) {
    err << "sld: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const CapacityError& e) {
    err << "sld: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  }
}

}  // namespace sld::cli
