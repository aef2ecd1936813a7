#pragma once

namespace sld {

/// Regularized upper incomplete gamma for integer order:
/// e^{-x} sum_{k<n} x^k / k!, i.e. P(Z > x) for Z ~ Erlang(n, 1).
double gamma_reg_upper(int n, double x);

/// x >= 0 with gamma_reg_upper(n, x) == y, for y in (0, 1].
/// Bracketing bisection with Newton steps on log(y).
double gamma_reg_upper_inv(int n, double y);

/// Erlang(n, 1) density z^{n-1} e^{-z} / (n-1)!, the law of ||h||^2 for h ~ CN(0, I_n).
double erlang_pdf(int n, double z);

}  // namespace sld
