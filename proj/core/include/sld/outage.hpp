#pragma once

#include "sld/error.hpp"
#include "sld/params.hpp"

namespace sld {

/// ((1 - sigma) / 2^{B1})^{1/(N-1)}: the quantization error that leaves
/// exactly a `connection_outage` fraction of directions in outage.
double outage_error_quantile(const SystemParams& p);

/// (N - 1)(epsilon^{-1/(N-1)} - 1)
double secrecy_gamma(const SystemParams& p);

/// Capacity with the worst-case quantization error 2^{-B1/(N-1)}.
double rate_r1(const SystemParams& p, double phi, double gain2);

/// Capacity with a perfectly aligned beam. +inf for a noiseless receiver.
double rate_r2(const SystemParams& p, double phi, double gain2);

/// Connection outage probability under the spherical-cap cell model.
double pco_qca(const SystemParams& p, double rb, double phi, double gain2);

/// Secrecy outage probability against a noiseless single-antenna eavesdropper.
double pso(const SystemParams& p, double re, double phi);

/// Largest codeword rate whose connection outage does not exceed sigma.
double rb_max(const SystemParams& p, double phi, double gain2);

/// Smallest redundancy whose secrecy outage does not exceed epsilon.
double re_min(const SystemParams& p, double phi);

/// Smallest positive integer strictly greater than log2((1 - sigma) / epsilon).
/// Throws UnboundedRequirementError for epsilon == 0.
int b1_min(double connection_outage, double secrecy_outage);

/// Minimum ||h||^2 for a positive secrecy rate. Throws FeasibilityError when
/// the CDI bit condition fails.
double mu_min(const SystemParams& p);

/// Both feasibility conditions, never throws for valid params.
FeasibilityReport assess_feasibility(const SystemParams& p);

}  // namespace sld
