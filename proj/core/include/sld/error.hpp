#pragma once

#include <stdexcept>
#include <string>

#include "sld/params.hpp"

namespace sld {

/// Out-of-range or malformed input.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request exceeds what can be enumerated explicitly (e.g. a 2^17 entry codebook).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A constraint that no finite resource can satisfy, e.g. zero secrecy outage.
class UnboundedRequirementError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No positive secrecy rate is achievable; carries the diagnosis.
class FeasibilityError : public std::runtime_error {
 public:
  FeasibilityError(const std::string& what, FeasibilityReport report)
      : std::runtime_error(what), report_(std::move(report)) {}

  [[nodiscard]] const FeasibilityReport& report() const noexcept { return report_; }

 private:
  FeasibilityReport report_;
};

}  // namespace sld
