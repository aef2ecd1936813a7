#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include "json.hpp"
#include "sld/error.hpp"
#include "sld/montecarlo.hpp"
#include "sld/outage.hpp"
#include "sld/rate_design.hpp"
#include "sld/throughput.hpp"

namespace sld::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t as_cell(int v) { return static_cast<std::int64_t>(v); }

// Closed-form design when the gain clears the threshold, nothing otherwise.
std::optional<RateDesign> try_design(const SystemParams& p, double gain2) {
  const auto rep = assess_feasibility(p);
  if (!rep.feasible_bits || !(gain2 > rep.mu_min)) return std::nullopt;
  return design_closed_form(p, gain2);
}

std::optional<CgiQuantizer> try_quantizer(const SystemParams& p, CgiScheme scheme) {
  try {
    switch (scheme) {
      case CgiScheme::exact: return CgiQuantizer::exact(p);
      case CgiScheme::one_bit: return build_one_bit_quantizer(p);
      case CgiScheme::equalized: return build_equalized_quantizer(p);
    }
  } catch (const ParameterError&) {
  } catch (const FeasibilityError&) {
  }
  return std::nullopt;
}

double quantized_eta(const SystemParams& p, CgiScheme scheme) {
  if (scheme == CgiScheme::exact) return throughput_exact_cgi(p).eta;
  const auto q = try_quantizer(p, scheme);
  return q ? throughput_quantized_cgi(p, *q).eta : kNaN;
}

CgiQuantizer require_quantizer(const SystemParams& p, CgiScheme scheme) {
  switch (scheme) {
    case CgiScheme::exact: return CgiQuantizer::exact(p);
    case CgiScheme::one_bit: return build_one_bit_quantizer(p);
    case CgiScheme::equalized: return build_equalized_quantizer(p);
  }
  throw ParameterError("unknown CGI scheme");
}

CsvTable table1(const ExperimentConfig&) {
  CsvTable t{"table1", {"sigma", "epsilon", "b1_min"}, {}};
  for (double s : {1.0, 0.1, 0.01}) {
    for (double e : {1.0, 0.1, 0.01, 0.001}) t.add({s, e, as_cell(b1_min(s, e))});
  }
  return t;
}

CsvTable outage(const ExperimentConfig& cfg) {
  CsvTable t{"outage",
             {"rate", "pco_qca", "pco_empirical", "pco_std_err", "pso", "pso_empirical", "pso_std_err"},
             {}};
  const auto sim = cfg.sim();
  std::shared_ptr<const Codebook> cb;
  if (cfg.draws > 0) cb = resolve_codebook(sim);
  auto with_cb = sim;
  with_cb.codebook = cb;
  for (double r : cfg.axis.values()) {
    const double pco = pco_qca(cfg.params, r, cfg.phi, cfg.gain2);
    const double ps = pso(cfg.params, r, cfg.phi);
    if (cfg.draws == 0) {
      t.add({r, pco, kNaN, kNaN, ps, kNaN, kNaN});
      continue;
    }
    const auto ec = empirical_pco(with_cb, r, cfg.phi, cfg.gain2);
    const auto es = empirical_pso(with_cb, r, cfg.phi);
    t.add({r, pco, ec.value, ec.std_err, ps, es.value, es.std_err});
  }
  return t;
}

CsvTable throughput(const ExperimentConfig& cfg) {
  CsvTable t{"throughput", {cfg.axis.variable, "eta_exact", "eta_quantized", "eta_asymptote"}, {}};
  for (double x : cfg.axis.values()) {
    const auto c = with_axis_value(cfg, cfg.axis.variable, x);
    t.add({x, throughput_exact_cgi(c.params).eta, quantized_eta(c.params, cfg.cgi), throughput_asymptote(c.params)});
  }
  return t;
}

CsvTable fig1(const ExperimentConfig& cfg) {
  CsvTable t{"fig1", {"P", "sigma", "rs_closed_form", "rs_empirical", "std_err"}, {}};
  if (cfg.draws == 0) throw ConfigError("fig1 needs draws > 0");
  auto sim = cfg.sim();
  sim.codebook = resolve_codebook(sim);
  const auto grid = uniform_phi_grid(cfg.phi_points);
  for (double P : cfg.axis.values()) {
    for (double s : cfg.sigma_list) {
      auto c = sim;
      c.params.power = P;
      c.params.connection_outage = s;
      c.params.validate();
      const double closed = SecrecyRateCurve(c.params)(cfg.gain2);
      const auto e = empirical_rs_star(c, cfg.gain2, grid);
      t.add({P, s, closed, e.rs_star, e.std_err});
    }
  }
  return t;
}

CsvTable fig2(const ExperimentConfig& cfg) {
  CsvTable t{"fig2", {"b1", "sigma", "phi_star", "rs_star"}, {}};
  int first = cfg.b1_max + 1;
  for (double s : cfg.sigma_list) first = std::min(first, b1_min(s, cfg.params.secrecy_outage));
  for (int b = first; b <= cfg.b1_max; ++b) {
    for (double s : cfg.sigma_list) {
      if (b < b1_min(s, cfg.params.secrecy_outage)) continue;
      auto p = cfg.params;
      p.cdi_bits = b;
      p.connection_outage = s;
      const auto d = try_design(p, cfg.gain2);
      t.add({as_cell(b), s, d ? d->phi_star : kNaN, d ? d->rs_star : kNaN});
    }
  }
  return t;
}

CsvTable fig3(const ExperimentConfig& cfg) {
  CsvTable t{"fig3", {"P", "b1", "phi_star", "rs_star", "phi_perfect", "rs_perfect"}, {}};
  for (double P : cfg.axis.values()) {
    auto p = cfg.params;
    p.power = P;
    const auto perfect = design_perfect_csi(p, cfg.gain2);
    for (int b : cfg.b1_list) {
      p.cdi_bits = b;
      const auto d = try_design(p, cfg.gain2);
      t.add({P, as_cell(b), d ? d->phi_star : kNaN, d ? d->rs_star : kNaN, perfect.phi_star, perfect.rs_star});
    }
  }
  return t;
}

CsvTable fig4(const ExperimentConfig& cfg) {
  CsvTable t{"fig4",
             {"P", "eta_exact", "eta_b2_4", "eta_b2_5", "eta_one_bit", "mc_b2_5_nominal", "mc_b2_5_nominal_std_err",
              "mc_b2_5_realized", "mc_b2_5_realized_std_err"},
             {}};
  for (double P : cfg.axis.values()) {
    auto p = cfg.params;
    p.power = P;
    std::vector<Cell> row{P, throughput_exact_cgi(p).eta};
    for (int b2 : {4, 5, 1}) {
      p.cgi_bits = b2;
      row.emplace_back(quantized_eta(p, b2 == 1 ? CgiScheme::one_bit : CgiScheme::equalized));
    }
    p.cgi_bits = 5;
    const auto q = try_quantizer(p, CgiScheme::equalized);
    if (cfg.draws > 0 && q) {
      auto sim = cfg.sim();
      sim.params = p;
      const auto r = empirical_throughput(sim, *q);
      row.insert(row.end(), {r.nominal.value, r.nominal.std_err, r.realized.value, r.realized.std_err});
    } else {
      row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN});
    }
    t.add(std::move(row));
  }
  return t;
}

CsvTable surface(const ExperimentConfig& cfg) {
  CsvTable t{"surface", {"epsilon", "sigma", "eta", "is_argmax"}, {}};
  const auto sigmas = cfg.axis.values();
  for (double e : cfg.epsilon_list) {
    std::vector<double> eta;
    for (double s : sigmas) {
      auto p = cfg.params;
      p.secrecy_outage = e;
      p.connection_outage = s;
      eta.push_back(throughput_exact_cgi(p).eta);
    }
    const auto best = static_cast<std::size_t>(std::max_element(eta.begin(), eta.end()) - eta.begin());
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      t.add({e, sigmas[i], eta[i], std::int64_t{i == best ? 1 : 0}});
    }
  }
  return t;
}

CsvTable fig5(const ExperimentConfig& cfg) {
  CsvTable t{"fig5", {"n", "epsilon", "tau", "cdi_bits", "cgi_bits", "eta", "is_argmax"}, {}};
  for (int n : cfg.n_list) {
    for (double e : cfg.epsilon_list) {
      auto p = cfg.params;
      p.antennas = n;
      p.secrecy_outage = e;
      const auto sweep = sweep_bit_allocation(p, cfg.total_bits);
      for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        const auto& pt = sweep.points[i];
        t.add({as_cell(n), e, pt.tau, as_cell(pt.cdi_bits), as_cell(pt.cgi_bits), pt.eta,
               std::int64_t{i == sweep.best ? 1 : 0}});
      }
    }
  }
  return t;
}

CsvTable sweep_tau(const ExperimentConfig& cfg) {
  CsvTable t{"sweep-tau", {"tau", "eta", "is_argmax"}, {}};
  const auto sweep = sweep_bit_allocation(cfg.params, cfg.total_bits);
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    t.add({sweep.points[i].tau, sweep.points[i].eta, std::int64_t{i == sweep.best ? 1 : 0}});
  }
  return t;
}

CsvTable fig6(const ExperimentConfig& cfg) {
  CsvTable t{"fig6", {"n", "epsilon", "reached", "total_bits", "bits_per_antenna", "eta", "eta_perfect"}, {}};
  for (int n : cfg.n_list) {
    for (double e : cfg.epsilon_list) {
      auto p = cfg.params;
      p.antennas = n;
      p.secrecy_outage = e;
      try {
        const auto r = bits_for_fraction(p, cfg.fraction);
        t.add({as_cell(n), e, std::int64_t{1}, as_cell(r.total_bits), r.bits_per_antenna, r.eta, r.eta_perfect});
      } catch (const FeasibilityError&) {
        t.add({as_cell(n), e, std::int64_t{0}, std::int64_t{-1}, kNaN, kNaN, perfect_feedback_throughput(p)});
      }
    }
  }
  return t;
}

CsvTable bits_for_fraction_table(const ExperimentConfig& cfg) {
  CsvTable t{"bits-for-fraction",
             {"fraction", "total_bits", "cgi_bits", "bits_per_antenna", "eta", "eta_perfect"},
             {}};
  const auto r = bits_for_fraction(cfg.params, cfg.fraction);
  t.add({cfg.fraction, as_cell(r.total_bits), as_cell(r.cgi_bits), r.bits_per_antenna, r.eta, r.eta_perfect});
  return t;
}

CsvTable montecarlo(const ExperimentConfig& cfg) {
  CsvTable t{"montecarlo",
             {"scheme", "draws", "eta_analytic", "realized", "realized_std_err", "nominal", "nominal_std_err",
              "outage_when_transmitting", "outage_std_err", "suspended_fraction"},
             {}};
  if (cfg.draws == 0) throw ConfigError("montecarlo needs draws > 0");
  const auto q = require_quantizer(cfg.params, cfg.cgi);
  const double analytic = cfg.cgi == CgiScheme::exact ? throughput_exact_cgi(cfg.params).eta
                                                      : throughput_quantized_cgi(cfg.params, q).eta;
  const auto r = empirical_throughput(cfg.sim(), q);
  t.add({std::string(to_string(cfg.cgi)), static_cast<std::int64_t>(cfg.draws), analytic, r.realized.value,
         r.realized.std_err, r.nominal.value, r.nominal.std_err, r.outage_when_transmitting.value,
         r.outage_when_transmitting.std_err, static_cast<double>(r.suspended) / static_cast<double>(cfg.draws)});
  return t;
}

nlohmann::json report_json(const FeasibilityReport& rep) {
  return {{"b1_min", rep.b1_min},
          {"mu_min", std::isfinite(rep.mu_min) ? nlohmann::json(rep.mu_min) : nlohmann::json("inf")},
          {"feasible_bits", rep.feasible_bits},
          {"note", rep.note}};
}

}  // namespace

CsvTable run_table_experiment(const ExperimentConfig& cfg) {
  const auto& e = cfg.experiment;
  if (e == "table1") return table1(cfg);
  if (e == "outage") return outage(cfg);
  if (e == "throughput") return throughput(cfg);
  if (e == "fig1") return fig1(cfg);
  if (e == "fig2") return fig2(cfg);
  if (e == "fig3") return fig3(cfg);
  if (e == "fig4") return fig4(cfg);
  if (e == "surface") return surface(cfg);
  if (e == "fig5") return fig5(cfg);
  if (e == "sweep-tau") return sweep_tau(cfg);
  if (e == "fig6") return fig6(cfg);
  if (e == "bits-for-fraction") return bits_for_fraction_table(cfg);
  if (e == "montecarlo") return montecarlo(cfg);
  throw ConfigError("experiment '" + e + "' does not produce a table");
}

int run_design(const ExperimentConfig& cfg, DesignFormat format, std::ostream& out) {
  const auto& p = cfg.params;
  const auto rep = assess_feasibility(p);
  const bool feasible = rep.feasible_bits && cfg.gain2 > rep.mu_min;
  std::optional<RateDesign> d;
  double res_co = kNaN, res_so = kNaN;
  if (feasible) {
    d = design_closed_form(p, cfg.gain2);
    res_so = pso(p, d->re_star, d->phi_star) - p.secrecy_outage;
    if (d->phi_star < 1.0) res_co = pco_qca(p, d->rb_star, d->phi_star, cfg.gain2) - p.connection_outage;
  }

  std::string reason;
  if (!rep.feasible_bits) {
    reason = "b1 = " + std::to_string(p.cdi_bits) + " is below the required b1_min = " + std::to_string(rep.b1_min);
  } else if (!feasible) {
    reason = "gain2 = " + format_double(cfg.gain2) + " does not exceed the transmit threshold mu_min = " +
             format_double(rep.mu_min);
  }

  switch (format) {
    case DesignFormat::json: {
      nlohmann::json j;
      j["feasible"] = feasible;
      j["feasibility"] = report_json(rep);
      j["gain2"] = cfg.gain2;
      if (d) {
        j["design"] = {{"phi_star", d->phi_star}, {"rb_star", d->rb_star},   {"re_star", d->re_star},
                       {"rs_star", d->rs_star},   {"phi_max", d->phi_max},   {"alpha", d->alpha},
                       {"beta", d->beta},         {"gamma", d->gamma}};
        j["residuals"] = {{"connection", std::isnan(res_co) ? nlohmann::json(nullptr) : nlohmann::json(res_co)},
                          {"secrecy", res_so}};
      } else {
        j["error"] = reason;
      }
      out << j.dump(2) << '\n';
      break;
    }
    case DesignFormat::csv_row: {
      CsvTable t{"design",
                 {"phi_star", "rb_star", "re_star", "rs_star", "phi_max", "residual_connection", "residual_secrecy",
                  "b1_min", "mu_min"},
                 {}};
      if (d) {
        t.add({d->phi_star, d->rb_star, d->re_star, d->rs_star, d->phi_max, res_co, res_so, as_cell(rep.b1_min),
               rep.mu_min});
      } else {
        t.add({kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, as_cell(rep.b1_min), rep.mu_min});
      }
      write_csv(out, t);
      break;
    }
    case DesignFormat::text: {
      out << "b1_min  = " << rep.b1_min << " (b1 = " << p.cdi_bits << ")\n";
      out << "mu_min  = " << format_double(rep.mu_min) << " (gain2 = " << format_double(cfg.gain2) << ")\n";
      if (!d) {
        out << "infeasible: " << reason << '\n';
        break;
      }
      out << "phi*    = " << format_double(d->phi_star) << '\n';
      out << "Rb*     = " << format_double(d->rb_star) << '\n';
      out << "Re*     = " << format_double(d->re_star) << '\n';
      out << "Rs*     = " << format_double(d->rs_star) << '\n';
      out << "phi_max = " << format_double(d->phi_max) << '\n';
      out << "residual connection outage (pco - sigma)  = " << format_double(res_co) << '\n';
      out << "residual secrecy outage (pso - epsilon)   = " << format_double(res_so) << '\n';
      break;
    }
  }
  return feasible ? 0 : 3;
}

}  // namespace sld::cli
