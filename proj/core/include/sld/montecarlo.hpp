#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sld/codebook.hpp"
#include "sld/params.hpp"
#include "sld/throughput.hpp"

namespace sld {

/// Where the quantization error comes from in a simulation.
enum class CodebookSource {
  rvq,            // random codebook, explicit argmax quantization
  grassmannian,   // packed codebook, explicit argmax quantization
  qca_synthetic,  // error drawn from the spherical-cap law, no codebook
};

const char* to_string(CodebookSource source);

struct SimConfig {
  SystemParams params;
  std::uint64_t draws = 100000;
  std::uint64_t seed = 42;
  CodebookSource source = CodebookSource::qca_synthetic;
  unsigned workers = 1;
  int grassmannian_iterations = 4;
  /// Optional prebuilt codebook; generated from `seed` when null.
  std::shared_ptr<const Codebook> codebook;
};

struct EstimateWithError {
  double value = 0.0;
  double std_err = 0.0;
  std::uint64_t draws = 0;

  static EstimateWithError proportion(std::uint64_t hits, std::uint64_t n);
  static EstimateWithError mean(double sum, double sum_sq, std::uint64_t n);
};

/// Draws per independent sub-stream. Block b of a run always uses the same
/// stream, so results do not depend on the worker count.
inline constexpr std::uint64_t kDrawsPerBlock = 8192;

/// The codebook a config quantizes with (null for qca_synthetic).
std::shared_ptr<const Codebook> resolve_codebook(const SimConfig& cfg);

/// Connection outage frequency at a fixed gain, direction uniformly random.
EstimateWithError empirical_pco(const SimConfig& cfg, double rb, double phi, double gain2);

/// Secrecy outage frequency over eavesdropper channels g ~ CN(0, sigma_g^2 I).
EstimateWithError empirical_pso(const SimConfig& cfg, double re, double phi);

struct EmpiricalDesign {
  double rs_star = 0.0;
  double phi = 0.0;
  double rb = 0.0;
  /// Batch-means standard error of rs_star; 0 when the draws are too few.
  double std_err = 0.0;
};

/// Number of batches behind EmpiricalDesign::std_err.
inline constexpr std::size_t kRsStarBatches = 10;

/// Secrecy rate from inverting the simulated connection outage at each phi
/// on the grid (bisection to `rb_tolerance`), then maximizing over the grid.
EmpiricalDesign empirical_rs_star(const SimConfig& cfg, double gain2,
                                  std::span<const double> phi_grid, double rb_tolerance = 1e-3);

/// `points` values of phi evenly spaced strictly inside (0, 1).
std::vector<double> uniform_phi_grid(int points);

struct EmpiricalThroughput {
  /// Mean secrecy rate actually delivered (zero on connection outage).
  EstimateWithError realized;
  /// (1 - sigma) times the mean designed secrecy rate: the accounting behind
  /// the analytic throughput formulas.
  EstimateWithError nominal;
  /// Connection outage frequency among transmitting draws.
  EstimateWithError outage_when_transmitting;
  std::uint64_t suspended = 0;
  std::uint64_t transmitting = 0;
};

/// Full pipeline per draw: channel, CGI index, CDI quantization, design at the
/// assumed gain, outage check against the realized SINR.
EmpiricalThroughput empirical_throughput(const SimConfig& cfg, const CgiQuantizer& cgi);

/// Frequency of C_s < R_s^* at the closed-form design, where C_s is the
/// realized secrecy capacity [log2(1+SINR_d) - log2(1+SIR_e)]^+.
EstimateWithError empirical_secrecy_capacity_bound(const SimConfig& cfg, double gain2);

}  // namespace sld
