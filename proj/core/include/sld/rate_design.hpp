#pragma once

#include "sld/outage.hpp"

namespace sld {

/// Optimal wiretap-code rates and power split for one channel gain.
struct RateDesign {
  double phi_star = 0.0;  // information power fraction
  double rb_star = 0.0;   // codeword rate
  double re_star = 0.0;   // rate redundancy
  double rs_star = 0.0;   // secrecy rate rb - re, >= 0
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double phi_max = 0.0;   // upper end of the positive-rate power range
};

/// Closed-form optimum with both outage constraints active.
/// Throws FeasibilityError below the transmit threshold or with too few CDI bits,
/// ParameterError for a noiseless receiver (the optimum sits at phi -> 1).
RateDesign design_closed_form(const SystemParams& p, double gain2);

/// Direct maximization of rb_max(phi) - re_min(phi): 256-point bracketing grid
/// followed by golden-section search down to `tolerance` in phi.
RateDesign design_numeric(const SystemParams& p, double gain2, double tolerance = 1e-10);

/// The unlimited-feedback limit (B1 -> infinity) of the same design.
/// Returns an all-zero design when no positive rate exists.
RateDesign design_perfect_csi(const SystemParams& p, double gain2);

/// rb_max(phi) - re_min(phi), the quantity maximized over phi.
double design_objective(const SystemParams& p, double gain2, double phi);

/// R_s^*(z) as a reusable function of the channel gain z: zero at or below
/// the transmit threshold, the closed-form optimum above it.
class SecrecyRateCurve {
 public:
  explicit SecrecyRateCurve(const SystemParams& p);

  [[nodiscard]] double operator()(double gain2) const;
  [[nodiscard]] RateDesign design(double gain2) const;

  [[nodiscard]] bool feasible() const { return feasible_; }
  [[nodiscard]] double threshold() const { return mu_min_; }
  /// Limit of R_s^* as gain2 -> infinity (finite for sigma < 1 and epsilon < 1).
  [[nodiscard]] double limit() const;
  [[nodiscard]] const SystemParams& params() const { return params_; }

 private:
  SystemParams params_;
  bool feasible_ = false;
  double mu_min_ = 0.0;
  double leak_ = 0.0;   // outage_error_quantile
  double gamma_ = 0.0;
};

/// Unlimited-feedback secrecy rate as a function of the gain.
class PerfectRateCurve {
 public:
  explicit PerfectRateCurve(const SystemParams& p);
  [[nodiscard]] double operator()(double gain2) const;
  [[nodiscard]] double threshold() const { return threshold_; }

 private:
  SystemParams params_;
  double gamma_ = 0.0;
  double threshold_ = 0.0;
};

}  // namespace sld
