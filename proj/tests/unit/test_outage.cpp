#include <cmath>
#include <random>

#include "doctest.h"
#include "sld/error.hpp"
#include "sld/outage.hpp"

using namespace sld;

namespace {

SystemParams small_example() {
  SystemParams p;
  p.antennas = 2;
  p.cdi_bits = 2;
  p.power = 1.0;
  p.noise_power = 1.0;
  p.connection_outage = 0.5;
  p.secrecy_outage = 0.5;
  return p;
}

}  // namespace

TEST_CASE("required CDI bits reproduce the reference grid") {
  const double sigmas[] = {1.0, 0.1, 0.01};
  const double epsilons[] = {1.0, 0.1, 0.01, 0.001};
  const int expected[3][4] = {{1, 1, 1, 1}, {1, 4, 7, 10}, {1, 4, 7, 10}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(b1_min(sigmas[i], epsilons[j]) == expected[i][j]);
  }
}

TEST_CASE("required CDI bits: strict ceiling and edge cases") {
  CHECK(b1_min(0.0, 0.25) == 3);      // log2 4 = 2 exactly maps to 3
  CHECK(b1_min(0.0, 0.5) == 2);
  CHECK(b1_min(0.0, 1.0) == 1);       // log2 1 = 0 maps to 1
  CHECK(b1_min(0.6, 0.5) == 1);       // negative log maps to 1
  CHECK(b1_min(0.1, 0.9 / 8.0) == 4); // log2 is exactly 3
  CHECK_THROWS_AS(b1_min(0.1, 0.0), UnboundedRequirementError);
}

TEST_CASE("connection outage under the cap model") {
  auto p = small_example();
  SUBCASE("worked value 3/7") {
    CHECK(pco_qca(p, std::log2(1.4), 0.5, 1.0) == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
  }
  SUBCASE("piecewise ends and continuity") {
    for (double phi : {0.2, 0.5, 0.9}) {
      const double r1 = rate_r1(p, phi, 1.0);
      const double r2 = rate_r2(p, phi, 1.0);
      CHECK(pco_qca(p, 0.5 * r1, phi, 1.0) == 0.0);
      CHECK(pco_qca(p, r2 + 0.1, phi, 1.0) == 1.0);
      CHECK(std::abs(pco_qca(p, r1 * (1.0 + 1e-12), phi, 1.0)) < 1e-9);
      CHECK(std::abs(pco_qca(p, r2, phi, 1.0) - 1.0) < 1e-9);
    }
  }
  SUBCASE("non-decreasing in rate") {
    p.antennas = 4;
    p.cdi_bits = 8;
    double prev = 0.0;
    for (double rb = 0.0; rb < 6.0; rb += 0.01) {
      const double v = pco_qca(p, rb, 0.6, 2.0);
      CHECK(v >= prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(pco_qca(p, 1.0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(pco_qca(p, 1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("secrecy outage") {
  auto p = small_example();
  CHECK(pso(p, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (int n : {2, 3, 8}) {
    p.antennas = n;
    for (double phi : {0.1, 0.5, 0.99}) CHECK(pso(p, 0.0, phi) == 1.0);
    for (double re : {0.1, 3.0}) CHECK(pso(p, re, 1.0) == 1.0);
  }
  p.antennas = 4;
  double prev = 0.0;
  for (double phi = 0.01; phi < 1.0; phi += 0.01) {
    const double v = pso(p, 2.0, phi);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("minimum redundancy") {
  auto p = small_example();
  CHECK(re_min(p, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(re_min(p, 0.0) == 0.0);
  p.secrecy_outage = 1.0;
  for (double phi : {0.1, 0.7}) CHECK(re_min(p, phi) == 0.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    p.antennas = 2 + static_cast<int>(u(rng) * 10);
    p.secrecy_outage = std::exp(std::log(1e-4) * u(rng));
    const double phi = 0.001 + 0.998 * u(rng);
    CHECK(std::abs(pso(p, re_min(p, phi), phi) - p.secrecy_outage) <= 1e-10);
  }
}

TEST_CASE("maximum codeword rate") {
  auto p = small_example();
  p.connection_outage = 3.0 / 7.0;
  CHECK(rb_max(p, 0.5, 1.0) == doctest::Approx(std::log2(1.4)).epsilon(1e-12));

  p.connection_outage = 0.0;
  CHECK(rb_max(p, 0.3, 2.0) == doctest::Approx(rate_r1(p, 0.3, 2.0)).epsilon(1e-14));
  p.connection_outage = 1.0;
  CHECK(rb_max(p, 0.3, 2.0) == doctest::Approx(rate_r2(p, 0.3, 2.0)).epsilon(1e-14));

  SUBCASE("zero-error limit") {
    p.connection_outage = 0.0;
    p.cdi_bits = 200;
    CHECK(rb_max(p, 0.3, 2.0) == doctest::Approx(std::log2(1.0 + 2.0 * 0.3)).epsilon(1e-12));
  }
  SUBCASE("inverts the outage formula") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
      SystemParams q;
      q.antennas = 2 + static_cast<int>(u(rng) * 7);
      q.cdi_bits = 1 + static_cast<int>(u(rng) * 20);
      q.power = std::pow(10.0, -1.0 + 4.0 * u(rng));
      q.connection_outage = 0.001 + 0.99 * u(rng);
      const double phi = 0.01 + 0.98 * u(rng);
      const double g = 0.1 + 10.0 * u(rng);
      CHECK(std::abs(pco_qca(q, rb_max(q, phi, g), phi, g) - q.connection_outage) <= 1e-9);
    }
  }
  SUBCASE("increasing in gain and bits") {
    p.connection_outage = 0.05;
    p.antennas = 4;
    double prev = 0.0;
    for (double g = 0.1; g < 20.0; g *= 1.3) {
      const double r = rb_max(p, 0.5, g);
      CHECK(r > prev);
      prev = r;
    }
    prev = 0.0;
    for (int b = 1; b <= 30; ++b) {
      p.cdi_bits = b;
      const double r = rb_max(p, 0.5, 3.0);
      CHECK(r > prev);
      prev = r;
    }
  }
}

TEST_CASE("transmit threshold") {
  auto p = small_example();
  p.secrecy_outage = 0.25;
  p.connection_outage = 0.75;
  CHECK(mu_min(p) == doctest::Approx(4.0).epsilon(1e-14));

  SUBCASE("agrees with a bisection on positivity of the best rate") {
    // Smallest gain at which some phi gives rb_max > re_min.
    auto positive = [&](double g) {
      for (double phi = 1e-4; phi < 1.0; phi += 1e-4) {
        if (rb_max(p, phi, g) - re_min(p, phi) > 0.0) return true;
      }
      return false;
    };
    double lo = 1.0, hi = 10.0;
    for (int i = 0; i < 30; ++i) {
      const double mid = 0.5 * (lo + hi);
      (positive(mid) ? hi : lo) = mid;
    }
    CHECK(hi == doctest::Approx(4.0).epsilon(1e-3));
  }
  SUBCASE("noiseless receiver") {
    p.noise_power = 0.0;
    CHECK(mu_min(p) == 0.0);
  }
  SUBCASE("too few bits") {
    SystemParams q;
    q.connection_outage = 0.1;
    q.secrecy_outage = 0.01;
    q.cdi_bits = 6;
    try {
      (void)mu_min(q);
      FAIL("expected FeasibilityError");
    } catch (const FeasibilityError& e) {
      CHECK(e.report().b1_min == 7);
      CHECK_FALSE(e.report().feasible_bits);
    }
    const auto rep = assess_feasibility(q);
    CHECK_FALSE(rep.feasible_bits);
    CHECK(std::isinf(rep.mu_min));
    q.cdi_bits = 7;
    CHECK(assess_feasibility(q).feasible_bits);
    CHECK(std::isfinite(assess_feasibility(q).mu_min));
  }
  SUBCASE("blows up as the bits approach the limit") {
    SystemParams q;
    q.antennas = 2;
    q.connection_outage = 0.0;
    q.secrecy_outage = 0.3;  // limit log2(1/0.3) = 1.737
    q.cdi_bits = 2;
    const double near = mu_min(q);
    q.secrecy_outage = 0.2500001;  // limit just under 2
    CHECK(mu_min(q) > 1e4 * near);
  }
  SUBCASE("decreasing in bits and power") {
    SystemParams q;
    double prev = std::numeric_limits<double>::infinity();
    for (int b = b1_min(q.connection_outage, q.secrecy_outage); b <= 30; ++b) {
      q.cdi_bits = b;
      const double m = mu_min(q);
      CHECK(m < prev);
      prev = m;
    }
    prev = std::numeric_limits<double>::infinity();
    for (double P = 0.1; P < 1e4; P *= 2.0) {
      q.power = P;
      const double m = mu_min(q);
      CHECK(m < prev);
      prev = m;
    }
  }
}

TEST_CASE("parameter validation") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  auto bad = [](auto mutate) {
    SystemParams q;
    mutate(q);
    CHECK_THROWS_AS(q.validate(), ParameterError);
  };
  bad([](SystemParams& q) { q.antennas = 1; });
  bad([](SystemParams& q) { q.power = 0.0; });
  bad([](SystemParams& q) { q.noise_power = -1.0; });
  bad([](SystemParams& q) { q.connection_outage = 1.5; });
  bad([](SystemParams& q) { q.secrecy_outage = 1.1; });
  bad([](SystemParams& q) { q.cdi_bits = 0; });
  bad([](SystemParams& q) { q.cgi_bits = -1; });
  bad([](SystemParams& q) { q.truncation_mass = 0.0; });
  bad([](SystemParams& q) { q.eve_variance = 0.0; });
}
