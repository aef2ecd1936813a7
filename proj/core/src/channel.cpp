#include "sld/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sld/error.hpp"

namespace sld {

RandomStream derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x5eedu};
  return RandomStream(seq);
}

Complex inner(ConstComplexSpan a, ConstComplexSpan b) {
  if (a.size() != b.size()) {
    throw ParameterError("inner: dimension mismatch");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::conj(a[i]) * b[i];
  }
  return acc;
}

double squared_norm(ConstComplexSpan v) {
  double acc = 0.0;
  for (const auto& x : v) {
    acc += std::norm(x);
  }
  return acc;
}

ComplexVector normalized(ConstComplexSpan v) {
  const double nrm = std::sqrt(squared_norm(v));
  if (!(nrm > 0.0)) {
    throw ParameterError("normalized: zero vector");
  }
  ComplexVector out(v.begin(), v.end());
  for (auto& x : out) {
    x /= nrm;
  }
  return out;
}

ChannelRealization make_channel(ComplexVector h) {
  if (h.empty()) {
    throw ParameterError("make_channel: empty channel vector");
  }
  ChannelRealization chan;
  chan.gain2 = squared_norm(h);
  chan.direction = normalized(h);
  chan.h = std::move(h);
  return chan;
}

Beamformer make_beamformer(ComplexVector signal_dir, double phi, double power) {
  if (signal_dir.size() < 2) {
    throw ParameterError("make_beamformer: need at least 2 antennas");
  }
  if (!(phi > 0.0 && phi <= 1.0)) {
    throw ParameterError("make_beamformer: phi must lie in (0, 1]");
  }
  if (!(power > 0.0)) {
    throw ParameterError("make_beamformer: power must be positive");
  }
  Beamformer bf;
  bf.null_basis = complete_null_basis(signal_dir);
  bf.signal_dir = std::move(signal_dir);
  bf.phi = phi;
  bf.power = power;
  bf.sigma_u2 = power * phi;
  bf.sigma_v2 = power * (1.0 - phi) / static_cast<double>(bf.signal_dir.size() - 1);
  return bf;
}

double SirValue::capacity() const {
  if (infinite) {
    return std::numeric_limits<double>::infinity();
  }
  return std::log2(1.0 + value);
}

ComplexVector sample_rayleigh(int dim, double variance, RandomStream& rng) {
  if (dim < 1) {
    throw ParameterError("sample_rayleigh: dim must be >= 1");
  }
  if (!(variance > 0.0)) {
    throw ParameterError("sample_rayleigh: variance must be positive");
  }
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
  ComplexVector v(static_cast<std::size_t>(dim));
  for (auto& x : v) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    x = Complex(re, im);
  }
  return v;
}

ComplexVector sample_direction(int dim, RandomStream& rng) {
  return normalized(sample_rayleigh(dim, 1.0, rng));
}

ColumnMatrix complete_null_basis(ConstComplexSpan signal_dir) {
  const std::size_t n = signal_dir.size();
  if (n < 2) {
    throw ParameterError("complete_null_basis: need dimension >= 2");
  }
  const double nrm2 = squared_norm(signal_dir);
  if (std::abs(std::sqrt(nrm2) - 1.0) > 1e-8) {
    throw ParameterError("complete_null_basis: signal direction is not unit-norm (norm^2 = " +
                         std::to_string(nrm2) + ")");
  }

  // Reflector H = I - 2 w w^H / |w|^2 with w = c + alpha e1 maps c onto -alpha e1,
  // so H e1 is parallel to c and columns 2..N of H span its complement.
  const double a0 = std::abs(signal_dir[0]);
  const Complex alpha = a0 > 0.0 ? signal_dir[0] / a0 : Complex(1.0, 0.0);
  ComplexVector w(signal_dir.begin(), signal_dir.end());
  w[0] += alpha;
  const double w2 = squared_norm(w);  // = 2 + 2|c_0|, never below 2

  ColumnMatrix basis(n, n - 1);
  for (std::size_t col = 1; col < n; ++col) {
    const Complex scale = 2.0 * std::conj(w[col]) / w2;
    for (std::size_t row = 0; row < n; ++row) {
      basis(row, col - 1) = (row == col ? 1.0 : 0.0) - w[row] * scale;
    }
  }
  return basis;
}

double sinr_from_alignment(double gain2, double cos2_theta, double sigma_u2, double sigma_v2,
                           double noise_power) {
  const double leak = 1.0 - cos2_theta;
  const double denom = gain2 * (leak > 0.0 ? leak : 0.0) * sigma_v2 + noise_power;
  const double num = gain2 * cos2_theta * sigma_u2;
  if (denom <= 0.0) {
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return num / denom;
}

double sinr_desired(const ChannelRealization& chan, const Beamformer& bf, double noise_power) {
  if (chan.direction.size() != bf.dim()) {
    throw ParameterError("sinr_desired: dimension mismatch");
  }
  const double cos2 = std::norm(inner(chan.direction, bf.signal_dir));
  return sinr_from_alignment(chan.gain2, cos2, bf.sigma_u2, bf.sigma_v2, noise_power);
}

SirValue sir_eavesdropper(ConstComplexSpan g, const Beamformer& bf) {
  if (g.size() != bf.dim()) {
    throw ParameterError("sir_eavesdropper: dimension mismatch");
  }
  const double g2 = squared_norm(g);
  const double signal = std::norm(inner(g, bf.signal_dir));
  double leak = 0.0;
  for (std::size_t j = 0; j < bf.null_basis.cols(); ++j) {
    leak += std::norm(inner(g, bf.null_basis.column(j)));
  }
  // Projections below rounding level of |g|^2 count as exactly zero.
  const double interference = leak * bf.sigma_v2;
  if (leak <= 1e-24 * g2 || interference <= 0.0) {
    if (signal * bf.sigma_u2 > 0.0) {
      return {0.0, true};
    }
    return {0.0, false};
  }
  return {signal * bf.sigma_u2 / interference, false};
}

ComplexVector transmit(const Beamformer& bf, RandomStream& rng) {
  const std::size_t n = bf.dim();
  ComplexVector x(n);
  const auto u = sample_rayleigh(1, bf.sigma_u2, rng)[0];
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = bf.signal_dir[i] * u;
  }
  if (bf.sigma_v2 > 0.0) {
    const auto v = sample_rayleigh(static_cast<int>(n - 1), bf.sigma_v2, rng);
    for (std::size_t j = 0; j < n - 1; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += bf.null_basis(i, j) * v[j];
      }
    }
  }
  return x;
}

ReceivedSample receive(const ChannelRealization& chan, ConstComplexSpan g, const Beamformer& bf,
                       double noise_power, RandomStream& rng) {
  const auto x = transmit(bf, rng);
  ReceivedSample out;
  out.y_d = inner(chan.h, x);
  if (noise_power > 0.0) {
    out.y_d += sample_rayleigh(1, noise_power, rng)[0];
  }
  out.sinr_d = sinr_desired(chan, bf, noise_power);
  out.sir_e = sir_eavesdropper(g, bf);
  return out;
}

}  // namespace sld
