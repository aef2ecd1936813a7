#include "sld/rate_design.hpp"

#include "golden.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sld {
namespace {

// Optimum of log2((1 + a x/(b(1-x) + s)) / (1 + g x/(1-x))) over x.
// The textbook form (A - sqrt(B)) / D loses digits to cancellation near the
// threshold; multiplying through by (A + sqrt(B)) and using
// A^2 - B = (b + s) D (a - b g - g s) gives the equivalent
//   x* = (b + s)(a - b g - g s) / ((b + s)(a - b g) + sqrt(B)).
// 1 - x* is formed directly for the same reason.
RateDesign optimum(double a, double b, double g, double s, double threshold_ratio) {
  RateDesign d;
  d.alpha = a;
  d.beta = b;
  d.gamma = g;
  d.phi_max = 1.0 - threshold_ratio;

  if (g == 0.0) {
    d.phi_star = 1.0;
    d.re_star = 0.0;
    d.rb_star = std::log2(1.0 + a / s);
    d.rs_star = d.rb_star;
    return d;
  }
  const double u = a - b * g;
  const double root = std::sqrt((u + s * (1.0 - g)) * a * g * s * (b + s));
  const double denom = (b + s) * u + root;
  const double phi = (b + s) * (u - g * s) / denom;
  const double one_minus = ((b + s) * g * s + root) / denom;

  d.phi_star = phi;
  d.rb_star = std::log2(1.0 + a * phi / (b * one_minus + s));
  d.re_star = std::log2(1.0 + g * phi / one_minus);
  const double rs = d.rb_star - d.re_star;
  d.rs_star = rs > 0.0 ? rs : 0.0;  // tiny negatives are rounding
  return d;
}

FeasibilityReport report_below_threshold(const SystemParams& p, double mu, double gain2) {
  FeasibilityReport rep;
  rep.b1_min = b1_min(p.connection_outage, p.secrecy_outage);
  rep.feasible_bits = true;
  rep.mu_min = mu;
  rep.note = "channel gain " + std::to_string(gain2) + " does not exceed transmit threshold " +
             std::to_string(mu);
  return rep;
}

void require_noisy(const SystemParams& p, const char* who) {
  if (!(p.noise_power > 0.0)) {
    throw ParameterError(std::string(who) +
                         ": noiseless receiver has no finite optimum (phi* -> 1); "
                         "use the large-power asymptote instead");
  }
}

}  // namespace

SecrecyRateCurve::SecrecyRateCurve(const SystemParams& p) : params_(p) {
  params_.validate();
  const FeasibilityReport rep = assess_feasibility(params_);
  feasible_ = rep.feasible_bits;
  mu_min_ = rep.mu_min;
  leak_ = outage_error_quantile(params_);
  gamma_ = secrecy_gamma(params_);
}

RateDesign SecrecyRateCurve::design(double gain2) const {
  if (!(gain2 > 0.0)) {
    throw ParameterError("design: channel gain must be positive");
  }
  if (!feasible_) {
    (void)mu_min(params_);  // throws with the bit diagnosis
  }
  require_noisy(params_, "design");
  if (!(gain2 > mu_min_)) {
    throw FeasibilityError("design: below transmit threshold",
                           report_below_threshold(params_, mu_min_, gain2));
  }
  const double scale = gain2 * params_.power;
  const double a = scale * (1.0 - leak_);
  const double b = scale * leak_ / static_cast<double>(params_.antennas - 1);
  return optimum(a, b, gamma_, params_.noise_power, mu_min_ / gain2);
}

double SecrecyRateCurve::operator()(double gain2) const {
  if (!feasible_ || !(gain2 > mu_min_)) {
    return 0.0;
  }
  if (!(params_.noise_power > 0.0)) {
    return limit();  // noiseless: supremum, approached as phi -> 1
  }
  return design(gain2).rs_star;
}

double SecrecyRateCurve::limit() const {
  if (!feasible_) {
    return 0.0;
  }
  if (leak_ == 0.0 || gamma_ == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double nm1 = static_cast<double>(params_.antennas - 1);
  return std::log2((1.0 / leak_ - 1.0) / (gamma_ / nm1));
}

PerfectRateCurve::PerfectRateCurve(const SystemParams& p) : params_(p) {
  params_.validate();
  gamma_ = secrecy_gamma(params_);
  threshold_ = gamma_ * params_.noise_power / params_.power;
}

double PerfectRateCurve::operator()(double gain2) const {
  return design_perfect_csi(params_, gain2).rs_star;
}

RateDesign design_closed_form(const SystemParams& p, double gain2) {
  return SecrecyRateCurve(p).design(gain2);
}

double design_objective(const SystemParams& p, double gain2, double phi) {
  return rb_max(p, phi, gain2) - re_min(p, phi);
}

RateDesign design_numeric(const SystemParams& p, double gain2, double tolerance) {
  p.validate();
  if (!(tolerance > 0.0)) {
    throw ParameterError("design_numeric: tolerance must be positive");
  }
  require_noisy(p, "design_numeric");
  const double mu = mu_min(p);
  if (!(gain2 > mu)) {
    throw FeasibilityError("design_numeric: below transmit threshold",
                           report_below_threshold(p, mu, gain2));
  }
  const double phi_hi = 1.0 - mu / gain2;
  auto f = [&](double phi) { return design_objective(p, gain2, phi); };

  constexpr int kGrid = 256;
  int best = 1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < kGrid; ++i) {
    const double phi = phi_hi * i / kGrid;
    const double v = f(phi);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = phi_hi * (best - 1) / kGrid;
  double hi = phi_hi * (best + 1) / kGrid;
  if (best - 1 == 0) {
    lo = phi_hi * 1e-12;
  }

  const double phi = detail::golden_maximize(f, lo, hi, tolerance).first;

  RateDesign d;
  d.phi_star = phi;
  d.rb_star = rb_max(p, phi, gain2);
  d.re_star = re_min(p, phi);
  d.rs_star = std::max(d.rb_star - d.re_star, 0.0);
  const double q = outage_error_quantile(p);
  d.alpha = gain2 * p.power * (1.0 - q);
  d.beta = gain2 * p.power * q / static_cast<double>(p.antennas - 1);
  d.gamma = secrecy_gamma(p);
  d.phi_max = phi_hi;
  return d;
}

RateDesign design_perfect_csi(const SystemParams& p, double gain2) {
  p.validate();
  if (!(gain2 > 0.0)) {
    return {};
  }
  require_noisy(p, "design_perfect_csi");
  const double g = secrecy_gamma(p);
  const double threshold = g * p.noise_power / p.power;
  if (!(gain2 > threshold)) {
    return {};
  }
  return optimum(gain2 * p.power, 0.0, g, p.noise_power, threshold / gain2);
}

}  // namespace sld
