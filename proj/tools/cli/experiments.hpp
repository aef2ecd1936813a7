#pragma once

#include <ostream>

#include "config.hpp"
#include "csv.hpp"

namespace sld::cli {

/// Runs a tabular experiment (everything except `design`). Deterministic for
/// a given config. Throws ConfigError, ParameterError or FeasibilityError.
CsvTable run_table_experiment(const ExperimentConfig& cfg);

enum class DesignFormat { text, json, csv_row };

/// Closed-form design for cfg.params at cfg.gain2. Returns the exit status:
/// 0 on success, 3 when the parameters are infeasible (the report is still
/// written in the requested format).
int run_design(const ExperimentConfig& cfg, DesignFormat format, std::ostream& out);

}  // namespace sld::cli
