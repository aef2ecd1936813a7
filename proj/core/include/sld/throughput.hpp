#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sld/params.hpp"
#include "sld/rate_design.hpp"

namespace sld {

enum class CgiScheme { exact, one_bit, equalized };

const char* to_string(CgiScheme scheme);

/// Explicit cell tables are kept up to this many interior cells; larger
/// equalized quantizers evaluate their edges on demand.
inline constexpr std::uint64_t kMaxTabulatedCells = std::uint64_t{1} << 16;
/// Largest CGI budget an equalized quantizer can index.
inline constexpr int kMaxCgiBits = 62;

/// Quantizer for the channel gain ||h||^2. The transmitter designs for the
/// smallest gain consistent with the fed-back index.
///
/// - exact: unquantized gain, transmit above the threshold.
/// - one_bit: transmit iff ||h||^2 >= mu_t, designed for mu_t.
/// - equalized: index 0 below mu1, 2^B2 - 2 equal-probability cells on
///   [mu1, mu2), and a top cell [mu2, inf) designed for mu2.
class CgiQuantizer {
 public:
  static CgiQuantizer exact(const SystemParams& p);
  static CgiQuantizer one_bit(const SystemParams& p, double mu_t);
  static CgiQuantizer equalized(const SystemParams& p, double mu1, double mu2);

  [[nodiscard]] CgiScheme scheme() const { return scheme_; }
  [[nodiscard]] int bits() const { return bits_; }
  [[nodiscard]] int antennas() const { return antennas_; }
  [[nodiscard]] double mu_t() const { return mu_t_; }
  [[nodiscard]] double mu1() const { return mu1_; }
  [[nodiscard]] double mu2() const { return mu2_; }

  /// Number of equal-mass cells between mu1 and mu2 (2^B2 - 2).
  [[nodiscard]] std::uint64_t interior_cells() const { return cells_; }
  /// Probability mass of each interior cell.
  [[nodiscard]] double cell_mass() const { return mass_; }

  /// Lower edge of interior cell k (0-based): edge(0) = mu1, edge(M) = mu2.
  [[nodiscard]] double edge(std::uint64_t k) const;

  /// Fed-back index for a channel gain; 0 means suspend.
  [[nodiscard]] std::uint64_t index_of(double gain2) const;

  /// Gain the transmitter designs for after receiving `index`; 0 for suspend.
  [[nodiscard]] double representative(std::uint64_t index) const;

  /// Gain the transmitter designs for when the true gain is `gain2`.
  [[nodiscard]] double assumed_gain(double gain2) const;

  /// Sorted cell edges mu1..mu2 (equalized) or {mu_t} (one-bit).
  /// Throws CapacityError when the table would exceed kMaxTabulatedCells.
  [[nodiscard]] std::vector<double> boundaries() const;

 private:
  CgiScheme scheme_ = CgiScheme::exact;
  int bits_ = 0;
  int antennas_ = 2;
  double threshold_ = 0.0;  // exact: mu_min
  double mu_t_ = 0.0;
  double mu1_ = 0.0;
  double mu2_ = 0.0;
  double tail1_ = 0.0;  // Q(N, mu1)
  double tail2_ = 0.0;  // Q(N, mu2)
  std::uint64_t cells_ = 0;
  double mass_ = 0.0;
  std::vector<double> edges_;  // tabulated when cells_ <= kMaxTabulatedCells
};

struct ThroughputResult {
  double eta = 0.0;  // bits per channel use
  std::string scheme;
  SystemParams params;
  std::string note;
};

/// (1 - sigma) * integral of R_s^*(z) over the Erlang(N, 1) law above the threshold.
ThroughputResult throughput_exact_cgi(const SystemParams& p);

/// Large-power limit of the exact-CGI throughput. +inf when epsilon == 1.
double throughput_asymptote(const SystemParams& p);

/// One-bit on-off quantizer with the throughput-maximizing threshold.
CgiQuantizer build_one_bit_quantizer(const SystemParams& p);

/// Equal-probability quantizer on [mu1, mu2] with mu1, mu2 set by the truncation mass.
CgiQuantizer build_equalized_quantizer(const SystemParams& p);

/// Throughput when the transmitter only learns the quantized gain.
ThroughputResult throughput_quantized_cgi(const SystemParams& p, const CgiQuantizer& q);

struct AllocationPoint {
  int cdi_bits = 0;
  int cgi_bits = 0;
  double tau = 0.0;  // cgi_bits / total
  double eta = 0.0;
  std::string note;
};

struct AllocationSweep {
  int total_bits = 0;
  std::vector<AllocationPoint> points;  // ascending in cgi_bits
  std::size_t best = 0;

  [[nodiscard]] const AllocationPoint& argmax() const { return points.at(best); }
};

/// Throughput for every split of `total_bits` with at least one CGI bit,
/// at most kMaxCgiBits CGI bits and at least b1_min CDI bits. The b1/b2
/// fields of `p` are ignored.
AllocationSweep sweep_bit_allocation(const SystemParams& p, int total_bits);

/// Secrecy throughput with perfect feedback (no (1 - sigma) discount).
double perfect_feedback_throughput(const SystemParams& p);

struct FeedbackRequirement {
  int total_bits = 0;
  int cgi_bits = 0;
  double bits_per_antenna = 0.0;
  double eta = 0.0;
  double eta_perfect = 0.0;
};

/// Smallest total feedback budget (split optimized) reaching `fraction` of
/// the perfect-feedback throughput. Throws FeasibilityError if `max_total_bits`
/// is not enough.
FeedbackRequirement bits_for_fraction(const SystemParams& p, double fraction,
                                      int max_total_bits = 256);

namespace detail {
/// Equalized-quantizer throughput; `force_integral` evaluates the cell sum by
/// its Euler-Maclaurin expansion even when the cells are tabulated.
double equalized_throughput(const SystemParams& p, const CgiQuantizer& q, bool force_integral);
}  // namespace detail

}  // namespace sld
