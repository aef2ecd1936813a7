#include "sld/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "sld/error.hpp"

namespace sld {
namespace {

void check_shape(int dim, int bits, const char* who) {
  if (dim < 2) {
    throw ParameterError(std::string(who) + ": dimension must be >= 2");
  }
  if (bits < 1) {
    throw ParameterError(std::string(who) + ": bits must be >= 1");
  }
  if (bits > kMaxEnumerableBits) {
    throw CapacityError(std::string(who) + ": " + std::to_string(bits) +
                        " bits exceeds the enumerable bound of " +
                        std::to_string(kMaxEnumerableBits));
  }
}

std::vector<ComplexVector> random_vectors(int dim, int bits, RandomStream& rng) {
  std::vector<ComplexVector> out(std::size_t{1} << bits);
  for (auto& v : out) {
    v = sample_direction(dim, rng);
  }
  return out;
}

// Gradient descent on the energy sum_{i<j} (1 - |rho_ij|^2)^-s over chordal
// distances. The exponent grows over the run so the push concentrates on the
// closest pairs; steps are normalized to the largest gradient and shrink
// geometrically. Returns the best max correlation seen.
double refine_repulsion(std::vector<ComplexVector>& vecs, int sweeps) {
  const std::size_t m = vecs.size();
  const std::size_t n = vecs.front().size();
  constexpr double kFirstStep = 0.1;
  constexpr double kLastStep = 1e-4;
  constexpr double kFirstExponent = 1.0;
  constexpr double kLastExponent = 40.0;

  auto best = vecs;
  double best_corr = compute_max_pair_correlation(vecs);
  std::vector<ComplexVector> grad(m, ComplexVector(n));

  for (int sweep = 0; sweep < sweeps && best_corr > 1e-12; ++sweep) {
    const double t = sweeps > 1 ? static_cast<double>(sweep) / (sweeps - 1) : 1.0;
    const double step = kFirstStep * std::pow(kLastStep / kFirstStep, t);
    const double s = kFirstExponent * std::pow(kLastExponent / kFirstExponent, t);
    for (auto& g : grad) {
      std::fill(g.begin(), g.end(), Complex{});
    }
    // Weights are taken relative to the closest pair to keep them finite.
    double d_min = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        d_min = std::min(d_min, 1.0 - std::norm(inner(vecs[j], vecs[i])));
      }
    }
    d_min = std::max(d_min, 1e-300);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const Complex rho = inner(vecs[j], vecs[i]);  // c_j^H c_i
        const double d = std::max(1.0 - std::norm(rho), 1e-300);
        const double w = std::pow(d_min / d, s + 1.0);
        if (w < 1e-30) {
          continue;
        }
        for (std::size_t k = 0; k < n; ++k) {
          grad[i][k] += w * rho * vecs[j][k];
          grad[j][k] += w * std::conj(rho) * vecs[i][k];
        }
      }
    }
    double g_max = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      // Tangent component only: drop the part along c_i itself.
      const Complex along = inner(vecs[i], grad[i]);
      for (std::size_t k = 0; k < n; ++k) {
        grad[i][k] -= along * vecs[i][k];
      }
      g_max = std::max(g_max, std::sqrt(squared_norm(grad[i])));
    }
    if (g_max <= 0.0) {
      break;
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        vecs[i][k] -= (step / g_max) * grad[i][k];
      }
      vecs[i] = normalized(vecs[i]);
    }
    const double now = compute_max_pair_correlation(vecs);
    if (now < best_corr) {
      best_corr = now;
      best = vecs;
    }
  }
  vecs = std::move(best);
  return best_corr;
}

int refinement_sweeps(std::size_t m) {
  if (m <= 256) {
    return 400;
  }
  if (m <= 1024) {
    return 60;
  }
  return 0;
}

}  // namespace

double compute_max_pair_correlation(const std::vector<ComplexVector>& vectors) {
  double best = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      best = std::max(best, std::abs(inner(vectors[i], vectors[j])));
    }
  }
  return std::min(best, 1.0);
}

Codebook::Codebook(int dim, int bits, std::vector<ComplexVector> vectors,
                   std::optional<double> max_pair_correlation)
    : dim_(dim), bits_(bits), vectors_(std::move(vectors)), max_corr_(max_pair_correlation) {
  check_shape(dim, bits, "Codebook");
  if (vectors_.size() != (std::size_t{1} << bits)) {
    throw ParameterError("Codebook: expected 2^" + std::to_string(bits) + " vectors, got " +
                         std::to_string(vectors_.size()));
  }
  for (const auto& v : vectors_) {
    if (v.size() != static_cast<std::size_t>(dim)) {
      throw ParameterError("Codebook: vector of wrong dimension");
    }
    if (std::abs(squared_norm(v) - 1.0) > 1e-10) {
      throw ParameterError("Codebook: vector is not unit-norm");
    }
  }
}

double Codebook::max_pair_correlation() const {
  if (max_corr_) {
    return *max_corr_;
  }
  return compute_max_pair_correlation(vectors_);
}

Codebook generate_rvq(int dim, int bits, RandomStream& rng) {
  check_shape(dim, bits, "generate_rvq");
  return Codebook(dim, bits, random_vectors(dim, bits, rng));
}

Codebook generate_grassmannian(int dim, int bits, RandomStream& rng, int iterations) {
  check_shape(dim, bits, "generate_grassmannian");
  if (iterations < 1) {
    throw ParameterError("generate_grassmannian: iterations must be >= 1");
  }
  const int sweeps = refinement_sweeps(std::size_t{1} << bits);
  std::vector<ComplexVector> best;
  double best_corr = 2.0;
  for (int it = 0; it < iterations; ++it) {
    auto cand = random_vectors(dim, bits, rng);
    const double corr =
        sweeps > 0 ? refine_repulsion(cand, sweeps) : compute_max_pair_correlation(cand);
    if (corr < best_corr) {
      best_corr = corr;
      best = std::move(cand);
    }
  }
  return Codebook(dim, bits, std::move(best), best_corr);
}

QuantizationResult quantize_direction(ConstComplexSpan d, const Codebook& cb) {
  if (d.size() != static_cast<std::size_t>(cb.dim())) {
    throw ParameterError("quantize_direction: dimension mismatch");
  }
  QuantizationResult res;
  double best = -1.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double c2 = std::norm(inner(cb[i], d));
    if (c2 > best) {
      best = c2;
      res.index = i;
    }
  }
  res.cos2_theta = std::clamp(best, 0.0, 1.0);
  return res;
}

double qca_max_error(int dim, int bits) {
  if (dim < 2 || bits < 1) {
    throw ParameterError("qca_max_error: need dim >= 2 and bits >= 1");
  }
  return std::exp2(-static_cast<double>(bits) / static_cast<double>(dim - 1));
}

double sample_qca_error(int dim, int bits, RandomStream& rng) {
  if (dim < 2 || bits < 0) {
    throw ParameterError("sample_qca_error: need dim >= 2 and bits >= 0");
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  return std::pow(std::ldexp(u, -bits), 1.0 / static_cast<double>(dim - 1));
}

void write_codebook(std::ostream& os, const Codebook& cb) {
  os << cb.dim() << ' ' << cb.bits() << '\n';
  const auto old_prec = os.precision(17);
  for (const auto& v : cb.vectors()) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k > 0) {
        os << ' ';
      }
      os << v[k].real() << ' ' << v[k].imag();
    }
    os << '\n';
  }
  os.precision(old_prec);
}

Codebook read_codebook(std::istream& is) {
  int dim = 0;
  int bits = 0;
  if (!(is >> dim >> bits)) {
    throw ParameterError("read_codebook: missing 'N B1' header");
  }
  check_shape(dim, bits, "read_codebook");
  std::vector<ComplexVector> vecs(std::size_t{1} << bits, ComplexVector(static_cast<std::size_t>(dim)));
  for (auto& v : vecs) {
    for (auto& x : v) {
      double re = 0.0;
      double im = 0.0;
      if (!(is >> re >> im)) {
        throw ParameterError("read_codebook: truncated vector data");
      }
      x = Complex(re, im);
    }
  }
  return Codebook(dim, bits, std::move(vecs));
}

}  // namespace sld
