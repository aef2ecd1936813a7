#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "sld/channel.hpp"

namespace sld {

/// Largest explicit codebook size, in bits. Beyond this only the
/// quantization-cell approximation is available.
inline constexpr int kMaxEnumerableBits = 16;

/// 2^B1 unit-norm quantization vectors of dimension N. Immutable.
class Codebook {
 public:
  /// Validates count and unit norms. `max_pair_correlation` may be supplied
  /// when the caller already knows it.
  Codebook(int dim, int bits, std::vector<ComplexVector> vectors,
           std::optional<double> max_pair_correlation = std::nullopt);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int bits() const { return bits_; }
  [[nodiscard]] std::size_t size() const { return vectors_.size(); }
  [[nodiscard]] const ComplexVector& operator[](std::size_t i) const { return vectors_[i]; }
  [[nodiscard]] const std::vector<ComplexVector>& vectors() const { return vectors_; }

  /// max_{i != j} |c_i^H c_j|. O(M^2 N) unless known at construction.
  [[nodiscard]] double max_pair_correlation() const;

 private:
  int dim_;
  int bits_;
  std::vector<ComplexVector> vectors_;
  std::optional<double> max_corr_;
};

double compute_max_pair_correlation(const std::vector<ComplexVector>& vectors);

struct QuantizationResult {
  std::size_t index = 0;
  double cos2_theta = 0.0;
};

/// Random vector quantization: entries uniform on the unit complex hypersphere.
Codebook generate_rvq(int dim, int bits, RandomStream& rng);

/// Codebook aimed at minimizing the maximum pairwise correlation: `iterations`
/// random restarts, each refined by a correlation-weighted repulsion, best kept.
Codebook generate_grassmannian(int dim, int bits, RandomStream& rng, int iterations);

/// Index maximizing |c^H d|, lowest index on ties.
QuantizationResult quantize_direction(ConstComplexSpan d, const Codebook& cb);

/// 2^{-B1/(N-1)}: largest quantization error 1 - cos^2 inside an approximate cell.
double qca_max_error(int dim, int bits);

/// Draw of 1 - cos^2(theta) under the spherical-cap cell model,
/// CDF 2^{B1} x^{N-1} on [0, 2^{-B1/(N-1)}].
double sample_qca_error(int dim, int bits, RandomStream& rng);

/// Text format: "N B1" header then one row of 2N interleaved re/im values per vector.
void write_codebook(std::ostream& os, const Codebook& cb);
Codebook read_codebook(std::istream& is);

}  // namespace sld
