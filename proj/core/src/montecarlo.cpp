#include "sld/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "sld/channel.hpp"
#include "sld/error.hpp"
#include "sld/outage.hpp"
#include "sld/rate_design.hpp"

namespace sld {

namespace {

// Stream ids are (tag << 40) | block so each estimator draws from its own family.
enum class StreamTag : std::uint64_t {
  codebook = 1,
  pco = 2,
  pso = 3,
  rs_star = 4,
  throughput = 5,
  capacity = 6,
};

RandomStream block_stream(const SimConfig& cfg, StreamTag tag, std::uint64_t block) {
  return derive_stream(cfg.seed, (static_cast<std::uint64_t>(tag) << 40) | block);
}

void check_config(const SimConfig& cfg) {
  cfg.params.validate();
  if (cfg.draws == 0) throw ParameterError("draws must be positive");
  if (cfg.codebook && static_cast<int>(cfg.codebook->dim()) != cfg.params.antennas) {
    throw ParameterError("codebook dimension does not match antennas");
  }
}

// Runs `kernel(rng, count)` over fixed-size blocks and returns the per-block
// results in block order, regardless of which worker produced them.
template <class Result, class Kernel>
std::vector<Result> run_blocks(const SimConfig& cfg, StreamTag tag, Kernel&& kernel) {
  const std::uint64_t blocks = (cfg.draws + kDrawsPerBlock - 1) / kDrawsPerBlock;
  std::vector<Result> out(blocks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      auto rng = block_stream(cfg, tag, b);
      const std::uint64_t count = std::min(kDrawsPerBlock, cfg.draws - b * kDrawsPerBlock);
      out[b] = kernel(rng, count);
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, cfg.workers), blocks));
  if (workers == 1) {
    work();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  return out;
}

// Draws cos^2(theta) for a uniformly random direction.
class AlignmentSampler {
 public:
  AlignmentSampler(const SimConfig& cfg, std::shared_ptr<const Codebook> cb)
      : n_(cfg.params.antennas), bits_(cfg.params.cdi_bits), cb_(std::move(cb)) {}

  double operator()(RandomStream& rng) const {
    if (!cb_) return 1.0 - sample_qca_error(n_, bits_, rng);
    const auto d = sample_direction(n_, rng);
    return quantize_direction(d, *cb_).cos2_theta;
  }

  // Alignment for a given unit direction.
  double of(ConstComplexSpan dir, RandomStream& rng) const {
    if (!cb_) return 1.0 - sample_qca_error(n_, bits_, rng);
    return quantize_direction(dir, *cb_).cos2_theta;
  }

 private:
  int n_;
  int bits_;
  std::shared_ptr<const Codebook> cb_;
};

struct Counter {
  std::uint64_t hits = 0;
  std::uint64_t n = 0;
};

EstimateWithError reduce_counts(const std::vector<Counter>& parts) {
  Counter total;
  for (const auto& c : parts) {
    total.hits += c.hits;
    total.n += c.n;
  }
  return EstimateWithError::proportion(total.hits, total.n);
}

}  // namespace

const char* to_string(CodebookSource source) {
  switch (source) {
    case CodebookSource::rvq: return "rvq";
    case CodebookSource::grassmannian: return "grassmannian";
    case CodebookSource::qca_synthetic: return "qca";
  }
  return "unknown";
}

EstimateWithError EstimateWithError::proportion(std::uint64_t hits, std::uint64_t n) {
  if (n == 0) return {};
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

EstimateWithError EstimateWithError::mean(double sum, double sum_sq, std::uint64_t n) {
  if (n == 0) return {};
  const double nd = static_cast<double>(n);
  const double m = sum / nd;
  const double var = n > 1 ? std::max(0.0, (sum_sq - nd * m * m) / (nd - 1.0)) : 0.0;
  return {m, std::sqrt(var / nd), n};
}

std::shared_ptr<const Codebook> resolve_codebook(const SimConfig& cfg) {
  if (cfg.codebook) return cfg.codebook;
  if (cfg.source == CodebookSource::qca_synthetic) return nullptr;
  auto rng = block_stream(cfg, StreamTag::codebook, 0);
  const int n = cfg.params.antennas;
  const int b = cfg.params.cdi_bits;
  if (cfg.source == CodebookSource::rvq) return std::make_shared<Codebook>(generate_rvq(n, b, rng));
  return std::make_shared<Codebook>(generate_grassmannian(n, b, rng, cfg.grassmannian_iterations));
}

EstimateWithError empirical_pco(const SimConfig& cfg, double rb, double phi, double gain2) {
  check_config(cfg);
  if (!(phi > 0.0 && phi <= 1.0)) throw ParameterError("phi must lie in (0, 1]");
  if (!(rb >= 0.0)) throw ParameterError("rate must be non-negative");
  if (!(gain2 > 0.0)) throw ParameterError("gain must be positive");
  const auto& p = cfg.params;
  const double su2 = p.power * phi;
  const double sv2 = p.power * (1.0 - phi) / (p.antennas - 1);
  const double sinr_needed = std::exp2(rb) - 1.0;
  const AlignmentSampler align(cfg, resolve_codebook(cfg));
  const auto parts = run_blocks<Counter>(cfg, StreamTag::pco, [&](RandomStream& rng, std::uint64_t count) {
    Counter c{0, count};
    for (std::uint64_t i = 0; i < count; ++i) {
      const double sinr = sinr_from_alignment(gain2, align(rng), su2, sv2, p.noise_power);
      if (sinr <= sinr_needed && rb > 0.0) ++c.hits;
    }
    return c;
  });
  return reduce_counts(parts);
}

EstimateWithError empirical_pso(const SimConfig& cfg, double re, double phi) {
  check_config(cfg);
  if (!(phi > 0.0 && phi <= 1.0)) throw ParameterError("phi must lie in (0, 1]");
  if (!(re >= 0.0)) throw ParameterError("rate must be non-negative");
  const auto& p = cfg.params;
  const double sir_needed = std::exp2(re) - 1.0;
  const auto parts = run_blocks<Counter>(cfg, StreamTag::pso, [&](RandomStream& rng, std::uint64_t count) {
    // The eavesdropper law does not depend on the beam, so one random beam per block.
    const auto bf = make_beamformer(sample_direction(p.antennas, rng), phi, p.power);
    Counter c{0, count};
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto g = sample_rayleigh(p.antennas, p.eve_variance, rng);
      const auto sir = sir_eavesdropper(g, bf);
      if (sir.infinite || sir.value >= sir_needed) ++c.hits;
    }
    return c;
  });
  return reduce_counts(parts);
}

std::vector<double> uniform_phi_grid(int points) {
  if (points < 1) throw ParameterError("phi grid needs at least one point");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = (i + 1.0) / (points + 1.0);
  return grid;
}

namespace {

// Grid search over phi with rb found by bisection on the sorted alignment sample.
EmpiricalDesign rs_star_from_sample(const SystemParams& p, double gain2, std::span<const double> phi_grid,
                                    double rb_tolerance, std::span<const double> cos2) {
  const double n = static_cast<double>(cos2.size());
  EmpiricalDesign best;
  bool first = true;
  for (const double phi : phi_grid) {
    const double su2 = p.power * phi;
    const double sv2 = p.power * (1.0 - phi) / (p.antennas - 1);
    // SINR is increasing in cos^2, so outage at rate r is the fraction of
    // samples at or below the alignment where the SINR equals 2^r - 1.
    auto outage_fraction = [&](double rate) {
      const double s = std::exp2(rate) - 1.0;
      const double c = s * (gain2 * sv2 + p.noise_power) / (gain2 * (su2 + s * sv2));
      const auto k = std::upper_bound(cos2.begin(), cos2.end(), c) - cos2.begin();
      return static_cast<double>(k) / n;
    };
    const double top = std::log2(1.0 + gain2 * su2 / p.noise_power);
    double rb = top;
    if (p.connection_outage < 1.0) {
      double lo = 0.0;
      double hi = top;
      if (outage_fraction(hi) <= p.connection_outage) {
        lo = hi;
      }
      while (hi - lo > rb_tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (outage_fraction(mid) <= p.connection_outage) lo = mid;
        else hi = mid;
      }
      rb = lo;
    }
    const double rs = rb - re_min(p, phi);
    if (first || rs > best.rs_star) best = {rs, phi, rb, 0.0};
    first = false;
  }
  best.rs_star = std::max(0.0, best.rs_star);
  return best;
}

}  // namespace

EmpiricalDesign empirical_rs_star(const SimConfig& cfg, double gain2, std::span<const double> phi_grid,
                                  double rb_tolerance) {
  check_config(cfg);
  if (!(gain2 > 0.0)) throw ParameterError("gain must be positive");
  if (!(rb_tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (phi_grid.empty()) throw ParameterError("phi grid is empty");
  for (const double phi : phi_grid) {
    if (!(phi > 0.0 && phi < 1.0)) throw ParameterError("phi grid values must lie in (0, 1)");
  }
  const auto& p = cfg.params;
  const AlignmentSampler align(cfg, resolve_codebook(cfg));

  // Common random numbers: one alignment sample shared by every phi.
  const auto parts = run_blocks<std::vector<double>>(cfg, StreamTag::rs_star,
                                                     [&](RandomStream& rng, std::uint64_t count) {
                                                       std::vector<double> v(count);
                                                       for (auto& x : v) x = align(rng);
                                                       return v;
                                                     });
  std::vector<double> cos2;
  cos2.reserve(cfg.draws);
  for (const auto& part : parts) cos2.insert(cos2.end(), part.begin(), part.end());

  // Batch means for the standard error.
  double se = 0.0;
  const std::size_t batch = cos2.size() / kRsStarBatches;
  std::vector<double> batch_rs;
  if (batch >= 1000) {
    for (std::size_t b = 0; b < kRsStarBatches; ++b) {
      std::vector<double> part(cos2.begin() + static_cast<std::ptrdiff_t>(b * batch),
                               cos2.begin() + static_cast<std::ptrdiff_t>((b + 1) * batch));
      std::sort(part.begin(), part.end());
      batch_rs.push_back(rs_star_from_sample(p, gain2, phi_grid, rb_tolerance, part).rs_star);
    }
    double sum = 0.0, sum_sq = 0.0;
    for (const double r : batch_rs) {
      sum += r;
      sum_sq += r * r;
    }
    // The full-sample estimate has roughly 1/K of a single batch's variance.
    se = EstimateWithError::mean(sum, sum_sq, batch_rs.size()).std_err;
  }

  std::sort(cos2.begin(), cos2.end());
  auto best = rs_star_from_sample(p, gain2, phi_grid, rb_tolerance, cos2);
  best.std_err = se;
  return best;
}

namespace {

struct ThroughputAcc {
  double realized = 0.0, realized_sq = 0.0;
  double nominal = 0.0, nominal_sq = 0.0;
  std::uint64_t outages = 0, transmitting = 0, suspended = 0, n = 0;
};

}  // namespace

EmpiricalThroughput empirical_throughput(const SimConfig& cfg, const CgiQuantizer& cgi) {
  check_config(cfg);
  const auto& p = cfg.params;
  if (cgi.antennas() != p.antennas) throw ParameterError("quantizer antenna count does not match");
  const SecrecyRateCurve curve(p);
  if (!curve.feasible()) {
    const auto rep = assess_feasibility(p);
    throw FeasibilityError("empirical_throughput: " + rep.note, rep);
  }
  const AlignmentSampler align(cfg, resolve_codebook(cfg));
  const double keep = 1.0 - p.connection_outage;

  const auto parts = run_blocks<ThroughputAcc>(cfg, StreamTag::throughput,
                                               [&](RandomStream& rng, std::uint64_t count) {
    ThroughputAcc a;
    a.n = count;
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto chan = make_channel(sample_rayleigh(p.antennas, 1.0, rng));
      const double assumed = cgi.assumed_gain(chan.gain2);
      if (!(assumed > curve.threshold())) {
        ++a.suspended;
        continue;
      }
      const auto d = curve.design(assumed);
      if (!(d.rs_star > 0.0)) {
        ++a.suspended;
        continue;
      }
      ++a.transmitting;
      const double c2 = align.of(chan.direction, rng);
      const double su2 = p.power * d.phi_star;
      const double sv2 = p.power * (1.0 - d.phi_star) / (p.antennas - 1);
      const double sinr = sinr_from_alignment(chan.gain2, c2, su2, sv2, p.noise_power);
      const double delivered = sinr > std::exp2(d.rb_star) - 1.0 ? d.rs_star : 0.0;
      if (delivered == 0.0) ++a.outages;
      a.realized += delivered;
      a.realized_sq += delivered * delivered;
      const double nominal = keep * d.rs_star;
      a.nominal += nominal;
      a.nominal_sq += nominal * nominal;
    }
    return a;
  });

  ThroughputAcc t;
  for (const auto& a : parts) {
    t.realized += a.realized;
    t.realized_sq += a.realized_sq;
    t.nominal += a.nominal;
    t.nominal_sq += a.nominal_sq;
    t.outages += a.outages;
    t.transmitting += a.transmitting;
    t.suspended += a.suspended;
    t.n += a.n;
  }
  EmpiricalThroughput r;
  r.realized = EstimateWithError::mean(t.realized, t.realized_sq, t.n);
  r.nominal = EstimateWithError::mean(t.nominal, t.nominal_sq, t.n);
  r.outage_when_transmitting = EstimateWithError::proportion(t.outages, t.transmitting);
  r.suspended = t.suspended;
  r.transmitting = t.transmitting;
  return r;
}

EstimateWithError empirical_secrecy_capacity_bound(const SimConfig& cfg, double gain2) {
  check_config(cfg);
  const auto& p = cfg.params;
  const auto d = design_closed_form(p, gain2);
  if (!(d.rs_star > 0.0)) throw ParameterError("gain is at or below the transmit threshold");
  const auto cb = resolve_codebook(cfg);
  const AlignmentSampler align(cfg, cb);
  const double su2 = p.power * d.phi_star;
  const double sv2 = p.power * (1.0 - d.phi_star) / (p.antennas - 1);

  std::vector<Beamformer> beams;
  if (cb) {
    beams.reserve(cb->size());
    for (std::size_t k = 0; k < cb->size(); ++k) beams.push_back(make_beamformer((*cb)[k], d.phi_star, p.power));
  }

  const auto parts = run_blocks<Counter>(cfg, StreamTag::capacity, [&](RandomStream& rng, std::uint64_t count) {
    Counter c{0, count};
    // Synthetic alignment has no beam of its own; the eavesdropper sees a random one.
    std::optional<Beamformer> shared;
    if (!cb) shared = make_beamformer(sample_direction(p.antennas, rng), d.phi_star, p.power);
    for (std::uint64_t i = 0; i < count; ++i) {
      double c2 = 0.0;
      const Beamformer* bf = nullptr;
      if (cb) {
        const auto dir = sample_direction(p.antennas, rng);
        const auto q = quantize_direction(dir, *cb);
        c2 = q.cos2_theta;
        bf = &beams[q.index];
      } else {
        c2 = align(rng);
        bf = &*shared;
      }
      const double cb_cap = std::log2(1.0 + sinr_from_alignment(gain2, c2, su2, sv2, p.noise_power));
      const auto g = sample_rayleigh(p.antennas, p.eve_variance, rng);
      const double ce_cap = sir_eavesdropper(g, *bf).capacity();
      const double cs = std::max(0.0, cb_cap - ce_cap);
      if (cs < d.rs_star) ++c.hits;
    }
    return c;
  });
  return reduce_counts(parts);
}

}  // namespace sld
