#include "sld/throughput.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "golden.hpp"
#include "sld/error.hpp"
#include "sld/gamma.hpp"

namespace sld {
namespace {

constexpr double kTailMass = 1e-12;

template <typename F>
double integrate(F&& f, double a, double b) {
  if (!(b > a)) {
    return 0.0;
  }
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-11, &err);
}

// Integral of rate(z) f_N(z) over (lo, inf), truncated where the Erlang tail
// drops below kTailMass of the mass above lo; the remainder is bounded by
// rate(cap) * Q(N, cap) or rate_limit * Q(N, cap).
template <typename Rate>
double integrate_against_gain(const Rate& rate, int n, double lo, double rate_limit) {
  const double above = gamma_reg_upper(n, lo);
  if (above <= 0.0) {
    return 0.0;
  }
  const double cap = gamma_reg_upper_inv(n, kTailMass * above);
  const double body = integrate([&](double z) { return rate(z) * erlang_pdf(n, z); }, lo, cap);
  const double tail_rate = std::isfinite(rate_limit) ? rate_limit : rate(cap);
  return body + tail_rate * gamma_reg_upper(n, cap);
}

double equalized_sum(const SystemParams& p, const SecrecyRateCurve& rs, const CgiQuantizer& q,
                     bool force_integral) {
  const int n = p.antennas;
  const std::uint64_t cells = q.interior_cells();
  const double mass = q.cell_mass();
  double interior = 0.0;
  if (cells <= kMaxTabulatedCells && !force_integral) {
    const auto edges = q.boundaries();
    for (std::uint64_t k = 0; k < cells; ++k) {
      interior += rs(edges[k]);
    }
    interior *= mass;
  } else {
    // Euler-Maclaurin for the left Riemann sum over equal-mass cells:
    // mass * sum_k F(k) = int rs f dz + mass (F(0) - F(M)) / 2
    //                   + mass^2 / 12 (rs'/f |_{mu2} - rs'/f |_{mu1}) + O(mass^4).
    const double a = q.mu1();
    const double b = q.mu2();
    auto slope_over_pdf = [&](double z) {
      const double h = 1e-5 * z;
      return (rs(z + h) - rs(z - h)) / (2.0 * h) / erlang_pdf(n, z);
    };
    interior = integrate([&](double z) { return rs(z) * erlang_pdf(n, z); }, a, b) +
               0.5 * mass * (rs(a) - rs(b)) +
               mass * mass / 12.0 * (slope_over_pdf(b) - slope_over_pdf(a));
  }
  const double top = rs(q.mu2()) * gamma_reg_upper(n, q.mu2());
  return interior + top;
}

}  // namespace

const char* to_string(CgiScheme scheme) {
  switch (scheme) {
    case CgiScheme::exact:
      return "exact";
    case CgiScheme::one_bit:
      return "one_bit";
    case CgiScheme::equalized:
      return "equalized";
  }
  return "unknown";
}

CgiQuantizer CgiQuantizer::exact(const SystemParams& p) {
  CgiQuantizer q;
  q.scheme_ = CgiScheme::exact;
  q.antennas_ = p.antennas;
  q.threshold_ = mu_min(p);
  return q;
}

CgiQuantizer CgiQuantizer::one_bit(const SystemParams& p, double mu_t) {
  const double mu = mu_min(p);
  if (!(mu_t > mu)) {
    throw ParameterError("one-bit quantizer: threshold must exceed the transmit threshold");
  }
  CgiQuantizer q;
  q.scheme_ = CgiScheme::one_bit;
  q.bits_ = 1;
  q.antennas_ = p.antennas;
  q.threshold_ = mu;
  q.mu_t_ = mu_t;
  return q;
}

CgiQuantizer CgiQuantizer::equalized(const SystemParams& p, double mu1, double mu2) {
  if (p.cgi_bits < 2) {
    throw ParameterError("equalized quantizer: needs at least 2 CGI bits");
  }
  if (p.cgi_bits > kMaxCgiBits) {
    throw CapacityError("equalized quantizer: more than " + std::to_string(kMaxCgiBits) + " CGI bits");
  }
  const double mu = mu_min(p);
  if (!(mu1 > mu || (mu == 0.0 && mu1 >= 0.0)) || !(mu2 > mu1)) {
    throw ParameterError("equalized quantizer: need mu_min < mu1 < mu2");
  }
  CgiQuantizer q;
  q.scheme_ = CgiScheme::equalized;
  q.bits_ = p.cgi_bits;
  q.antennas_ = p.antennas;
  q.threshold_ = mu;
  q.mu1_ = mu1;
  q.mu2_ = mu2;
  q.tail1_ = gamma_reg_upper(p.antennas, mu1);
  q.tail2_ = gamma_reg_upper(p.antennas, mu2);
  q.cells_ = (std::uint64_t{1} << p.cgi_bits) - 2;
  q.mass_ = (q.tail1_ - q.tail2_) / static_cast<double>(q.cells_);
  if (q.cells_ <= kMaxTabulatedCells) {
    std::vector<double> edges(q.cells_ + 1);
    for (std::uint64_t k = 0; k <= q.cells_; ++k) {
      edges[k] = q.edge(k);
    }
    q.edges_ = std::move(edges);
  }
  return q;
}

double CgiQuantizer::edge(std::uint64_t k) const {
  if (scheme_ != CgiScheme::equalized || k > cells_) {
    throw ParameterError("CgiQuantizer::edge: no such cell edge");
  }
  if (!edges_.empty()) {
    return edges_[k];
  }
  if (k == 0) {
    return mu1_;
  }
  if (k == cells_) {
    return mu2_;
  }
  return gamma_reg_upper_inv(antennas_, tail1_ - static_cast<double>(k) * mass_);
}

std::uint64_t CgiQuantizer::index_of(double gain2) const {
  switch (scheme_) {
    case CgiScheme::exact:
      return gain2 > threshold_ ? 1 : 0;
    case CgiScheme::one_bit:
      return gain2 >= mu_t_ ? 1 : 0;
    case CgiScheme::equalized:
      break;
  }
  if (gain2 < mu1_) {
    return 0;
  }
  if (gain2 >= mu2_) {
    return cells_ + 1;
  }
  if (!edges_.empty()) {
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), gain2);
    return static_cast<std::uint64_t>(it - edges_.begin());
  }
  const double pos = (tail1_ - gamma_reg_upper(antennas_, gain2)) / mass_;
  auto k = static_cast<std::uint64_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(cells_ - 1)));
  while (k > 0 && edge(k) > gain2) {
    --k;
  }
  while (k + 1 < cells_ && edge(k + 1) <= gain2) {
    ++k;
  }
  return k + 1;
}

double CgiQuantizer::representative(std::uint64_t index) const {
  if (index == 0) {
    return 0.0;
  }
  switch (scheme_) {
    case CgiScheme::exact:
      throw ParameterError("CgiQuantizer::representative: exact CGI has no index table");
    case CgiScheme::one_bit:
      if (index != 1) {
        throw ParameterError("CgiQuantizer::representative: one-bit index out of range");
      }
      return mu_t_;
    case CgiScheme::equalized:
      break;
  }
  if (index > cells_ + 1) {
    throw ParameterError("CgiQuantizer::representative: index out of range");
  }
  return index == cells_ + 1 ? mu2_ : edge(index - 1);
}

double CgiQuantizer::assumed_gain(double gain2) const {
  if (scheme_ == CgiScheme::exact) {
    return gain2 > threshold_ ? gain2 : 0.0;
  }
  return representative(index_of(gain2));
}

std::vector<double> CgiQuantizer::boundaries() const {
  switch (scheme_) {
    case CgiScheme::exact:
      return {threshold_};
    case CgiScheme::one_bit:
      return {mu_t_};
    case CgiScheme::equalized:
      break;
  }
  if (edges_.empty()) {
    throw CapacityError("CgiQuantizer::boundaries: " + std::to_string(cells_) +
                        " cells exceed the tabulation bound");
  }
  return edges_;
}

ThroughputResult throughput_exact_cgi(const SystemParams& p) {
  p.validate();
  ThroughputResult r;
  r.scheme = "exact";
  r.params = p;
  const FeasibilityReport rep = assess_feasibility(p);
  if (!rep.feasible_bits) {
    r.note = rep.note;
    return r;
  }
  const double keep = 1.0 - p.connection_outage;
  if (keep <= 0.0) {
    r.note = "connection outage 1: nothing is delivered";
    return r;
  }
  const SecrecyRateCurve rs(p);
  if (!(p.noise_power > 0.0)) {
    r.eta = keep * rs.limit();
    r.note = "noiseless receiver: rate saturates at its limit";
    return r;
  }
  r.eta = keep * integrate_against_gain(rs, p.antennas, rep.mu_min, rs.limit());
  return r;
}

double throughput_asymptote(const SystemParams& p) {
  p.validate();
  (void)mu_min(p);  // throws FeasibilityError for too few bits
  const double keep = 1.0 - p.connection_outage;
  if (keep <= 0.0) {
    return 0.0;
  }
  if (p.secrecy_outage >= 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double inv_nm1 = 1.0 / static_cast<double>(p.antennas - 1);
  const double num = std::pow(std::ldexp(1.0, p.cdi_bits) / keep, inv_nm1) - 1.0;
  const double den = std::pow(1.0 / p.secrecy_outage, inv_nm1) - 1.0;
  return keep * std::log2(num / den);
}

CgiQuantizer build_one_bit_quantizer(const SystemParams& p) {
  p.validate();
  if (p.cgi_bits != 1) {
    throw ParameterError("build_one_bit_quantizer: requires exactly 1 CGI bit");
  }
  const double mu = mu_min(p);
  const SecrecyRateCurve rs(p);
  const int n = p.antennas;
  auto objective = [&](double z) { return rs(z) * gamma_reg_upper(n, z); };

  // Coarse grid equally spaced in tail probability above mu_min, then golden section.
  const double above = gamma_reg_upper(n, mu);
  constexpr int kGrid = 512;
  if (!(above * 1e-6 / kGrid > 0.0)) {
    throw ParameterError("build_one_bit_quantizer: tail above threshold underflows");
  }
  std::vector<double> grid(kGrid + 1);
  grid[0] = mu;
  for (int i = 1; i < kGrid; ++i) {
    grid[i] = gamma_reg_upper_inv(n, above * (1.0 - static_cast<double>(i) / kGrid));
  }
  grid[kGrid] = gamma_reg_upper_inv(n, above * 1e-6 / kGrid);
  int best = 1;
  double best_val = -1.0;
  for (int i = 1; i < kGrid; ++i) {
    const double v = objective(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = grid[best - 1];
  const double hi = grid[best + 1];
  auto [mu_t, val] = detail::golden_maximize(objective, lo, hi, 1e-13 * std::max(1.0, hi));
  if (!(val >= best_val)) {
    mu_t = grid[best];
  }
  if (!(mu_t > mu)) {
    mu_t = grid[best];
  }
  return CgiQuantizer::one_bit(p, mu_t);
}

CgiQuantizer build_equalized_quantizer(const SystemParams& p) {
  p.validate();
  if (p.cgi_bits < 2) {
    throw ParameterError("build_equalized_quantizer: requires at least 2 CGI bits");
  }
  const double mu = mu_min(p);
  const int n = p.antennas;
  const double above = gamma_reg_upper(n, mu);
  const double delta = p.truncation_mass;
  if (!(above - delta > delta)) {
    throw ParameterError("build_equalized_quantizer: truncation mass " + std::to_string(delta) +
                         " leaves no interval (tail above threshold is " +
                         std::to_string(above) + ")");
  }
  const double mu1 = gamma_reg_upper_inv(n, above - delta);
  const double mu2 = gamma_reg_upper_inv(n, delta);
  return CgiQuantizer::equalized(p, mu1, mu2);
}

namespace detail {

double equalized_throughput(const SystemParams& p, const CgiQuantizer& q, bool force_integral) {
  const SecrecyRateCurve rs(p);
  return (1.0 - p.connection_outage) * equalized_sum(p, rs, q, force_integral);
}

}  // namespace detail

ThroughputResult throughput_quantized_cgi(const SystemParams& p, const CgiQuantizer& q) {
  p.validate();
  if (q.antennas() != p.antennas) {
    throw ParameterError("throughput_quantized_cgi: quantizer built for a different antenna count");
  }
  if (q.scheme() == CgiScheme::exact) {
    return throughput_exact_cgi(p);
  }
  ThroughputResult r;
  r.scheme = to_string(q.scheme());
  r.params = p;
  const SecrecyRateCurve rs(p);
  const double keep = 1.0 - p.connection_outage;
  if (q.scheme() == CgiScheme::one_bit) {
    r.eta = keep * rs(q.mu_t()) * gamma_reg_upper(p.antennas, q.mu_t());
  } else {
    r.eta = keep * equalized_sum(p, rs, q, false);
    if (q.interior_cells() > kMaxTabulatedCells) {
      r.note = "cell sum evaluated by Euler-Maclaurin";
    }
  }
  return r;
}

AllocationSweep sweep_bit_allocation(const SystemParams& p, int total_bits) {
  p.validate();
  const int need = b1_min(p.connection_outage, p.secrecy_outage);
  if (total_bits < need + 1) {
    FeasibilityReport rep;
    rep.b1_min = need;
    rep.mu_min = std::numeric_limits<double>::infinity();
    rep.note = "budget of " + std::to_string(total_bits) + " bits leaves no CGI bit above b1_min " +
               std::to_string(need);
    throw FeasibilityError("sweep_bit_allocation: " + rep.note, rep);
  }
  AllocationSweep sweep;
  sweep.total_bits = total_bits;
  for (int b2 = 1; b2 <= std::min(total_bits - need, kMaxCgiBits); ++b2) {
    SystemParams q = p;
    q.cdi_bits = total_bits - b2;
    q.cgi_bits = b2;
    AllocationPoint pt;
    pt.cdi_bits = q.cdi_bits;
    pt.cgi_bits = b2;
    pt.tau = static_cast<double>(b2) / total_bits;
    try {
      const CgiQuantizer quant = b2 == 1 ? build_one_bit_quantizer(q) : build_equalized_quantizer(q);
      pt.eta = throughput_quantized_cgi(q, quant).eta;
    } catch (const ParameterError& e) {
      pt.eta = 0.0;
      pt.note = e.what();
    }
    sweep.points.push_back(std::move(pt));
  }
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    if (sweep.points[i].eta > sweep.points[sweep.best].eta) {
      sweep.best = i;
    }
  }
  return sweep;
}

double perfect_feedback_throughput(const SystemParams& p) {
  p.validate();
  const PerfectRateCurve rs(p);
  return integrate_against_gain(rs, p.antennas, rs.threshold(),
                                std::numeric_limits<double>::infinity());
}

FeedbackRequirement bits_for_fraction(const SystemParams& p, double fraction, int max_total_bits) {
  p.validate();
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ParameterError("bits_for_fraction: fraction must lie in (0, 1)");
  }
  FeedbackRequirement req;
  req.eta_perfect = perfect_feedback_throughput(p);
  const double target = fraction * req.eta_perfect;
  const int need = b1_min(p.connection_outage, p.secrecy_outage);
  for (int total = need + 1; total <= max_total_bits; ++total) {
    const AllocationSweep sweep = sweep_bit_allocation(p, total);
    const AllocationPoint& best = sweep.argmax();
    if (best.eta > 0.0 && best.eta >= target) {
      req.total_bits = total;
      req.cgi_bits = best.cgi_bits;
      req.eta = best.eta;
      req.bits_per_antenna = static_cast<double>(total) / p.antennas;
      return req;
    }
  }
  FeasibilityReport rep;
  rep.b1_min = need;
  rep.feasible_bits = true;
  rep.mu_min = std::numeric_limits<double>::quiet_NaN();  // no single budget to quote
  rep.note = "fraction " + std::to_string(fraction) + " not reached within " +
             std::to_string(max_total_bits) + " feedback bits";
  throw FeasibilityError("bits_for_fraction: " + rep.note, rep);
}

}  // namespace sld
