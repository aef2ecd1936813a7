#pragma once

#include <string>

namespace sld {

/// Scalar configuration of one secure-transmission scenario.
///
/// All powers are linear and all rates are in bits per channel use. The
/// eavesdropper channel variance never enters the closed forms; it only
/// scales the simulated eavesdropper channel.
struct SystemParams {
  int antennas = 4;                  // N >= 2
  double power = 10.0;               // total transmit power P > 0
  double noise_power = 1.0;          // receiver noise sigma_d^2 >= 0
  double connection_outage = 0.05;   // sigma in [0, 1]
  double secrecy_outage = 0.02;      // epsilon in (0, 1]
  int cdi_bits = 10;                 // B1 >= 1
  int cgi_bits = 0;                  // B2 >= 0
  double truncation_mass = 1e-4;     // delta > 0
  double eve_variance = 1.0;         // sigma_g^2 > 0

  /// Throws ParameterError naming the first field out of range.
  void validate() const;

  [[nodiscard]] int total_bits() const { return cdi_bits + cgi_bits; }
};

/// Outcome of the two secure-transmission feasibility conditions.
struct FeasibilityReport {
  int b1_min = 1;
  double mu_min = 0.0;   // +inf when the bit condition fails
  bool feasible_bits = false;
  std::string note;
};

}  // namespace sld
