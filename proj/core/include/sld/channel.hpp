#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sld {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using ConstComplexSpan = std::span<const Complex>;

/// Seeded pseudo-random stream. All sampling takes one by reference.
using RandomStream = std::mt19937_64;

/// Independent stream derived from a master seed and a stream id. The same
/// (seed, id) pair always yields the same sequence.
RandomStream derive_stream(std::uint64_t seed, std::uint64_t stream_id);

/// a^H b
Complex inner(ConstComplexSpan a, ConstComplexSpan b);
double squared_norm(ConstComplexSpan v);
ComplexVector normalized(ConstComplexSpan v);

/// Dense column-major complex matrix, just big enough for null-space bases.
class ColumnMatrix {
 public:
  ColumnMatrix() = default;
  ColumnMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  [[nodiscard]] ConstComplexSpan column(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Channel vector split into gain and direction.
struct ChannelRealization {
  ComplexVector h;
  double gain2 = 0.0;       // ||h||^2
  ComplexVector direction;  // h / ||h||
};

ChannelRealization make_channel(ComplexVector h);

/// Artificial-noise beamformer: information along signal_dir, noise spread
/// over the orthogonal complement spanned by null_basis.
struct Beamformer {
  ComplexVector signal_dir;
  ColumnMatrix null_basis;  // N x (N-1), orthonormal, orthogonal to signal_dir
  double phi = 1.0;         // information power fraction in (0, 1]
  double power = 1.0;
  double sigma_u2 = 1.0;    // power * phi
  double sigma_v2 = 0.0;    // power * (1 - phi) / (N - 1)

  [[nodiscard]] std::size_t dim() const { return signal_dir.size(); }
};

Beamformer make_beamformer(ComplexVector signal_dir, double phi, double power);

/// Eavesdropper signal-to-interference ratio. `infinite` is set when no
/// artificial noise reaches the eavesdropper, which makes the ratio unbounded.
struct SirValue {
  double value = 0.0;
  bool infinite = false;

  /// log2(1 + SIR); +inf for the infinite sentinel.
  [[nodiscard]] double capacity() const;
};

struct ReceivedSample {
  Complex y_d;
  double sinr_d = 0.0;
  SirValue sir_e;
};

/// i.i.d. CN(0, variance) entries.
ComplexVector sample_rayleigh(int dim, double variance, RandomStream& rng);

/// Direction uniform on the unit complex hypersphere.
ComplexVector sample_direction(int dim, RandomStream& rng);

/// Deterministic Householder completion of a unit vector to an orthonormal basis.
ColumnMatrix complete_null_basis(ConstComplexSpan signal_dir);

/// SINR given the alignment cos^2(theta) between channel direction and beam.
double sinr_from_alignment(double gain2, double cos2_theta, double sigma_u2, double sigma_v2,
                           double noise_power);

double sinr_desired(const ChannelRealization& chan, const Beamformer& bf, double noise_power);

SirValue sir_eavesdropper(ConstComplexSpan g, const Beamformer& bf);

/// Transmitted vector x = c u + W v for one symbol.
ComplexVector transmit(const Beamformer& bf, RandomStream& rng);

/// One noisy reception at the desired receiver plus the eavesdropper SIR.
ReceivedSample receive(const ChannelRealization& chan, ConstComplexSpan g, const Beamformer& bf,
                       double noise_power, RandomStream& rng);

}  // namespace sld
