#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sld/error.hpp"
#include "sld/outage.hpp"
#include "sld/rate_design.hpp"

using namespace sld;

namespace {

// Power split written exactly as the textbook expression, without the
// rationalized rearrangement used by the library.
double phi_textbook(const SystemParams& p, double g) {
  const double n1 = p.antennas - 1.0;
  const double q = std::pow((1.0 - p.connection_outage) / std::ldexp(1.0, p.cdi_bits), 1.0 / n1);
  const double a = g * p.power * (1.0 - q);
  const double b = g * p.power * q / n1;
  const double c = n1 * (std::pow(1.0 / p.secrecy_outage, 1.0 / n1) - 1.0);
  const double s = p.noise_power;
  const double num = (b + s) * (a - b * c) - std::sqrt(a - b * c + s * (1.0 - c)) * std::sqrt(a * c * s * (b + s));
  return num / (b * (a - b * c) + a * s * (1.0 - c));
}

struct Draw {
  SystemParams p;
  double gain2;
};

// Feasible draw with a gain comfortably above the threshold.
Draw random_feasible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    SystemParams p;
    p.antennas = 2 + static_cast<int>(u(rng) * 7);
    p.connection_outage = std::exp(std::log(1e-3) * u(rng)) * 0.5;
    p.secrecy_outage = std::exp(std::log(1e-3) * u(rng)) * 0.5;
    const int lo = b1_min(p.connection_outage, p.secrecy_outage);
    if (lo > 20) continue;
    p.cdi_bits = lo + static_cast<int>(u(rng) * (21 - lo));
    p.power = std::pow(10.0, -1.0 + 5.0 * u(rng));
    const double mu = mu_min(p);
    const double g = mu * (1.0 + std::pow(10.0, -2.0 + 3.0 * u(rng)));
    if (!std::isfinite(g) || g > 1e6) continue;
    return {p, g};
  }
}

SystemParams fig2_params(double sigma) {
  SystemParams p;
  p.antennas = 4;
  p.power = 100.0;
  p.secrecy_outage = 0.01;
  p.connection_outage = sigma;
  return p;
}

}  // namespace

TEST_CASE("closed form matches the textbook expression") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 300; ++t) {
    const auto [p, g] = random_feasible(rng);
    const auto d = design_closed_form(p, g);
    const double ref = phi_textbook(p, g);
    // The textbook form cancels catastrophically when phi* is close to 1.
    CHECK(d.phi_star == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("closed form matches the numeric optimizer") {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 300; ++t) {
    const auto [p, g] = random_feasible(rng);
    const auto c = design_closed_form(p, g);
    const auto n = design_numeric(p, g);
    CHECK(std::abs(c.rs_star - n.rs_star) < 1e-6);
    CHECK(std::abs(c.phi_star - n.phi_star) < 1e-5);
  }
}

TEST_CASE("both outage constraints are tight at the design") {
  std::mt19937_64 rng(303);
  for (int t = 0; t < 300; ++t) {
    const auto [p, g] = random_feasible(rng);
    const auto d = design_closed_form(p, g);
    CHECK(d.rs_star == doctest::Approx(d.rb_star - d.re_star).epsilon(1e-12));
    CHECK(d.rs_star >= 0.0);
    CHECK(d.phi_star > 0.0);
    CHECK(d.phi_star < d.phi_max);
    CHECK(d.phi_max < 1.0);
    CHECK(std::abs(pso(p, d.re_star, d.phi_star) - p.secrecy_outage) < 1e-9);
    if (d.phi_star < 1.0 - 1e-9) {
      CHECK(std::abs(pco_qca(p, d.rb_star, d.phi_star, g) - p.connection_outage) < 1e-9);
    }
    const double q = outage_error_quantile(p);
    CHECK(d.alpha == doctest::Approx(g * p.power * (1.0 - q)).epsilon(1e-14));
    CHECK(d.beta == doctest::Approx(g * p.power * q / (p.antennas - 1)).epsilon(1e-14));
    CHECK(d.alpha + (p.antennas - 1) * d.beta == doctest::Approx(g * p.power).epsilon(1e-14));
  }
}

TEST_CASE("numeric optimizer: local maximum and unimodal objective") {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 40; ++t) {
    const auto [p, g] = random_feasible(rng);
    const double tol = 1e-10;
    const auto n = design_numeric(p, g, tol);
    const double f0 = design_objective(p, g, n.phi_star);
    if (n.phi_star - 10 * tol > 0.0) CHECK(f0 >= design_objective(p, g, n.phi_star - 10 * tol) - 1e-13);
    if (n.phi_star + 10 * tol < 1.0) CHECK(f0 >= design_objective(p, g, n.phi_star + 10 * tol) - 1e-13);

    // Discrete slope changes sign at most once over (0, phi_max).
    const int pts = 10000;
    int changes = 0;
    double prev_slope = 0.0;
    double prev = design_objective(p, g, n.phi_max / (pts + 1));
    for (int i = 2; i <= pts; ++i) {
      const double v = design_objective(p, g, n.phi_max * i / (pts + 1));
      const double slope = v - prev;
      if (std::abs(slope) > 1e-13 && prev_slope != 0.0 && (slope > 0) != (prev_slope > 0)) ++changes;
      if (std::abs(slope) > 1e-13) prev_slope = slope;
      prev = v;
    }
    CHECK(changes <= 1);
  }
}

TEST_CASE("threshold behaviour") {
  SystemParams p;
  const double mu = mu_min(p);
  CHECK(design_closed_form(p, mu * (1.0 + 1e-9)).rs_star < 1e-6);
  CHECK_THROWS_AS(design_closed_form(p, 0.5 * mu), FeasibilityError);
  CHECK_THROWS_AS(design_numeric(p, 0.5 * mu), FeasibilityError);
  p.cdi_bits = 2;
  CHECK_THROWS_AS(design_closed_form(p, 100.0), FeasibilityError);
}

// Brute-force reference values for P=100, eps=0.01, gain 4: phi* peaks at
// B1=10 (about 0.4505 for sigma=0.1) and only falls from there on.
TEST_CASE("power split against B1: rises near the threshold, then falls") {
  for (double sigma : {0.05, 0.1, 0.2}) {
    auto p = fig2_params(sigma);
    int peak = 0;
    double best = 0.0;
    std::vector<double> phis;
    for (int b = b1_min(sigma, p.secrecy_outage); b <= 30; ++b) {
      p.cdi_bits = b;
      phis.push_back(design_closed_form(p, 4.0).phi_star);
      if (phis.back() > best) {
        best = phis.back();
        peak = b;
      }
    }
    CHECK(peak == 10);
    const int first = b1_min(sigma, p.secrecy_outage);
    for (int b = first + 1; b <= 30; ++b) {
      const double prev = phis[static_cast<std::size_t>(b - first - 1)];
      const double cur = phis[static_cast<std::size_t>(b - first)];
      if (b <= peak) CHECK(cur > prev);
      else CHECK(cur < prev);
    }
  }
  auto p = fig2_params(0.1);
  p.cdi_bits = 10;
  CHECK(design_closed_form(p, 4.0).phi_star == doctest::Approx(0.4505).epsilon(2e-4));
  p.cdi_bits = 20;
  CHECK(design_closed_form(p, 4.0).phi_star == doctest::Approx(0.3031).epsilon(2e-4));
}

TEST_CASE("power split rises with power towards one") {
  SystemParams p;
  p.antennas = 4;
  p.connection_outage = 0.1;
  p.secrecy_outage = 0.01;
  for (int b : {8, 10, 12}) {
    p.cdi_bits = b;
    double prev = 0.0;
    for (double P = 10.0; P <= 1e7; P *= 1.5) {
      p.power = P;
      const double phi = design_closed_form(p, 4.0).phi_star;
      CHECK(phi > prev);
      prev = phi;
    }
    CHECK(prev > 0.99);
  }
}

TEST_CASE("large B1 approaches the perfect-CSI design") {
  SystemParams p;
  p.antennas = 2;
  p.cdi_bits = 40;
  const double mu = mu_min(p);
  for (double g : {1.5 * mu, 4.0 * mu, 10.0 * mu}) {
    const auto c = design_closed_form(p, g);
    const auto perfect = design_perfect_csi(p, g);
    CHECK(std::abs(c.phi_star - perfect.phi_star) < 1e-3);
    CHECK(std::abs(c.rs_star - perfect.rs_star) < 1e-3);
  }

  SUBCASE("four antennas converge more slowly but do converge") {
    p.antennas = 4;
    const double g = 4.0 * mu_min(p);
    double prev = 1e300;
    for (int b = 20; b <= 60; b += 10) {
      p.cdi_bits = b;
      const double gap = std::abs(design_closed_form(p, g).rs_star - design_perfect_csi(p, g).rs_star);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-4);
  }
}

TEST_CASE("perfect-CSI design") {
  SystemParams p;
  SUBCASE("no secrecy constraint sends everything as signal") {
    p.secrecy_outage = 1.0;
    const auto d = design_perfect_csi(p, 3.0);
    CHECK(d.phi_star == doctest::Approx(1.0));
    CHECK(d.rs_star == doctest::Approx(std::log2(1.0 + 3.0 * p.power / p.noise_power)).epsilon(1e-12));
  }
  SUBCASE("interior split even at huge power") {
    for (double P : {1e2, 1e6, 1e12}) {
      p.power = P;
      CHECK(design_perfect_csi(p, 2.0).phi_star < 1.0);
    }
  }
  SUBCASE("zero gain gives the zero design") {
    const auto d = design_perfect_csi(p, 0.0);
    CHECK(d.rs_star == 0.0);
  }
  SUBCASE("maximizes the perfect-CSI objective") {
    const double g = 2.5;
    const auto d = design_perfect_csi(p, g);
    const double c = secrecy_gamma(p);
    auto f = [&](double phi) {
      return std::log2(1.0 + g * p.power * phi / p.noise_power) - std::log2(1.0 + c * phi / (1.0 - phi));
    };
    for (double phi = 0.001; phi < 1.0; phi += 0.001) CHECK(f(phi) <= d.rs_star + 1e-12);
  }
}

TEST_CASE("secrecy rate curve") {
  SystemParams p;
  const SecrecyRateCurve rs(p);
  REQUIRE(rs.feasible());
  CHECK(rs(0.0) == 0.0);
  CHECK(rs(0.99 * rs.threshold()) == 0.0);
  double prev = 0.0;
  for (double g = rs.threshold() * 1.01; g < 1e4; g *= 1.2) {
    const double v = rs(g);
    CHECK(v >= prev);
    CHECK(v <= rs.limit());
    CHECK(v == doctest::Approx(design_closed_form(p, g).rs_star).epsilon(1e-12));
    prev = v;
  }
  CHECK(rs(1e12) == doctest::Approx(rs.limit()).epsilon(1e-6));

  SUBCASE("non-decreasing in B1") {
    double last = 0.0;
    for (int b = 7; b <= 20; ++b) {
      p.cdi_bits = b;
      const double v = SecrecyRateCurve(p)(6.0);
      CHECK(v >= last);
      last = v;
    }
  }
  SUBCASE("infeasible bits give a zero curve") {
    p.cdi_bits = 2;
    const SecrecyRateCurve none(p);
    CHECK_FALSE(none.feasible());
    CHECK(none(100.0) == 0.0);
  }
}

TEST_CASE("noiseless receiver is rejected by the closed form") {
  SystemParams p;
  p.noise_power = 0.0;
  CHECK_THROWS_AS(design_closed_form(p, 1.0), ParameterError);
}
