#include "sld/gamma.hpp"

#include <cmath>
#include <limits>

#include "sld/error.hpp"

namespace sld {

double gamma_reg_upper(int n, double x) {
  if (n < 1) {
    throw ParameterError("gamma_reg_upper: order must be >= 1");
  }
  if (x < 0.0 || std::isnan(x)) {
    throw ParameterError("gamma_reg_upper: argument must be >= 0");
  }
  if (x == 0.0) {
    return 1.0;
  }
  if (std::isinf(x)) {
    return 0.0;
  }
  // Sum first, scale once: e^{-x} x^k / k! underflows termwise for large x.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < n; ++k) {
    term *= x / k;
    sum += term;
  }
  return std::exp(std::log(sum) - x);
}

double erlang_pdf(int n, double z) {
  if (n < 1) {
    throw ParameterError("erlang_pdf: order must be >= 1");
  }
  if (z < 0.0) {
    return 0.0;
  }
  if (z == 0.0) {
    return n == 1 ? 1.0 : 0.0;
  }
  return std::exp((n - 1) * std::log(z) - z - std::lgamma(static_cast<double>(n)));
}

double gamma_reg_upper_inv(int n, double y) {
  if (n < 1) {
    throw ParameterError("gamma_reg_upper_inv: order must be >= 1");
  }
  if (!(y > 0.0 && y <= 1.0)) {
    throw ParameterError("gamma_reg_upper_inv: y must lie in (0, 1]");
  }
  if (y == 1.0) {
    return 0.0;
  }
  const double log_y = std::log(y);
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(n));
  while (gamma_reg_upper(n, hi) > y) {
    lo = hi;
    hi *= 2.0;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double q = gamma_reg_upper(n, x);
    if (q > y) {
      lo = x;
    } else {
      hi = x;
    }
    // Newton on F(x) = log Q(n, x) - log y, F'(x) = -pdf / Q.
    const double slope = -erlang_pdf(n, x) / q;
    double next = x;
    if (slope < 0.0 && q > 0.0) {
      next = x - (std::log(q) - log_y) / slope;
    }
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace sld
