#include "sld/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace sld {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_phi(double phi, const char* who) {
  if (!(phi > 0.0 && phi < 1.0)) {
    throw ParameterError(std::string(who) + ": phi must lie strictly inside (0, 1)");
  }
}

void check_gain(double gain2, const char* who) {
  if (!(gain2 > 0.0)) {
    throw ParameterError(std::string(who) + ": channel gain must be positive");
  }
}

double inv_nm1(const SystemParams& p) { return 1.0 / static_cast<double>(p.antennas - 1); }

}  // namespace

void SystemParams::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError("SystemParams: " + msg); };
  if (antennas < 2) fail("antennas must be >= 2");
  if (!(power > 0.0) || !std::isfinite(power)) fail("power must be positive and finite");
  if (!(noise_power >= 0.0) || !std::isfinite(noise_power)) fail("noise power must be >= 0");
  if (!(connection_outage >= 0.0 && connection_outage <= 1.0))
    fail("connection outage must lie in [0, 1]");
  if (!(secrecy_outage >= 0.0 && secrecy_outage <= 1.0))
    fail("secrecy outage must lie in [0, 1]");
  if (cdi_bits < 1) fail("CDI bits must be >= 1");
  if (cgi_bits < 0) fail("CGI bits must be >= 0");
  if (!(truncation_mass > 0.0 && truncation_mass < 0.5)) fail("truncation mass must lie in (0, 0.5)");
  if (!(eve_variance > 0.0)) fail("eavesdropper variance must be positive");
}

double outage_error_quantile(const SystemParams& p) {
  const double ratio = std::ldexp(1.0 - p.connection_outage, -p.cdi_bits);
  return std::pow(ratio, inv_nm1(p));
}

double secrecy_gamma(const SystemParams& p) {
  return static_cast<double>(p.antennas - 1) *
         (std::pow(1.0 / p.secrecy_outage, inv_nm1(p)) - 1.0);
}

double rate_r1(const SystemParams& p, double phi, double gain2) {
  const double err = std::exp2(-static_cast<double>(p.cdi_bits) * inv_nm1(p));
  const double num = gain2 * p.power * phi * (1.0 - err);
  const double den = gain2 * p.power * (1.0 - phi) * inv_nm1(p) * err + p.noise_power;
  if (den <= 0.0) {
    return num > 0.0 ? kInf : 0.0;
  }
  return std::log2(1.0 + num / den);
}

double rate_r2(const SystemParams& p, double phi, double gain2) {
  if (p.noise_power <= 0.0) {
    return kInf;
  }
  return std::log2(1.0 + gain2 * p.power * phi / p.noise_power);
}

double pco_qca(const SystemParams& p, double rb, double phi, double gain2) {
  check_phi(phi, "pco_qca");
  check_gain(gain2, "pco_qca");
  if (rb <= rate_r1(p, phi, gain2)) {
    return 0.0;
  }
  if (rb > rate_r2(p, phi, gain2)) {
    return 1.0;
  }
  const double snr_req = std::expm1(rb * std::log(2.0));  // 2^rb - 1
  const double num = gain2 * p.power * phi - p.noise_power * snr_req;
  const double den =
      gain2 * (p.power * phi + p.power * (1.0 - phi) * inv_nm1(p) * snr_req);
  const double x = std::max(num / den, 0.0);
  const double pco = 1.0 - std::ldexp(std::pow(x, p.antennas - 1), p.cdi_bits);
  return std::clamp(pco, 0.0, 1.0);
}

double pso(const SystemParams& p, double re, double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) {
    throw ParameterError("pso: phi must lie in (0, 1]");
  }
  if (re < 0.0) {
    throw ParameterError("pso: redundancy must be >= 0");
  }
  const double snr = std::expm1(re * std::log(2.0));
  const double base = 1.0 + snr * (1.0 / phi - 1.0) * inv_nm1(p);
  return std::pow(base, 1.0 - static_cast<double>(p.antennas));
}

double rb_max(const SystemParams& p, double phi, double gain2) {
  check_phi(phi, "rb_max");
  check_gain(gain2, "rb_max");
  if (p.connection_outage <= 0.0) {
    return rate_r1(p, phi, gain2);
  }
  if (p.connection_outage >= 1.0) {
    return rate_r2(p, phi, gain2);
  }
  const double q = outage_error_quantile(p);
  const double num = gain2 * p.power * phi * (1.0 - q);
  const double den = gain2 * p.power * (1.0 - phi) * inv_nm1(p) * q + p.noise_power;
  if (den <= 0.0) {
    return kInf;
  }
  return std::log2(1.0 + num / den);
}

double re_min(const SystemParams& p, double phi) {
  if (!(phi >= 0.0 && phi < 1.0)) {
    throw ParameterError("re_min: phi must lie in [0, 1)");
  }
  return std::log2(1.0 + phi / (1.0 - phi) * secrecy_gamma(p));
}

int b1_min(double connection_outage, double secrecy_outage) {
  if (!(connection_outage >= 0.0 && connection_outage <= 1.0)) {
    throw ParameterError("b1_min: connection outage must lie in [0, 1]");
  }
  if (!(secrecy_outage >= 0.0 && secrecy_outage <= 1.0)) {
    throw ParameterError("b1_min: secrecy outage must lie in (0, 1]");
  }
  if (secrecy_outage == 0.0) {
    throw UnboundedRequirementError(
        "b1_min: zero secrecy outage needs unboundedly many feedback bits");
  }
  const double slack = 1.0 - connection_outage;
  if (slack <= 0.0) {
    return 1;
  }
  // Strict inequality 2^B1 * epsilon > 1 - sigma, checked with exact ldexp.
  const double x = std::log2(slack / secrecy_outage);
  int b = std::max(1, static_cast<int>(std::floor(x)) + 1);
  while (b > 1 && std::ldexp(secrecy_outage, b - 1) > slack) {
    --b;
  }
  while (!(std::ldexp(secrecy_outage, b) > slack)) {
    ++b;
  }
  return b;
}

double mu_min(const SystemParams& p) {
  const int need = b1_min(p.connection_outage, p.secrecy_outage);
  if (p.cdi_bits < need) {
    FeasibilityReport rep;
    rep.b1_min = need;
    rep.mu_min = kInf;
    rep.feasible_bits = false;
    rep.note = "CDI bits " + std::to_string(p.cdi_bits) + " below required " + std::to_string(need);
    throw FeasibilityError("mu_min: " + rep.note, rep);
  }
  if (p.noise_power == 0.0) {
    return 0.0;
  }
  const double ratio = (1.0 - p.connection_outage) /
                       (std::ldexp(1.0, p.cdi_bits) * p.secrecy_outage);
  const double denom = p.power * (1.0 - std::pow(ratio, inv_nm1(p)));
  return secrecy_gamma(p) * p.noise_power / denom;
}

FeasibilityReport assess_feasibility(const SystemParams& p) {
  FeasibilityReport rep;
  rep.b1_min = b1_min(p.connection_outage, p.secrecy_outage);
  rep.feasible_bits = p.cdi_bits >= rep.b1_min;
  std::ostringstream note;
  if (rep.feasible_bits) {
    rep.mu_min = mu_min(p);
    note << "feasible: transmit when ||h||^2 > " << rep.mu_min;
  } else {
    rep.mu_min = kInf;
    note << "infeasible: need at least " << rep.b1_min << " CDI bits, have " << p.cdi_bits;
  }
  rep.note = note.str();
  return rep;
}

}  // namespace sld
