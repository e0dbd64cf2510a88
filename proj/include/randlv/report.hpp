#pragma once

// CSV tables and JSON documents for the command-line tool and campaign
// outputs. Numbers are printed with a fixed format so reruns are byte-identical.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "randlv/config.hpp"
#include "randlv/dynamics.hpp"
#include "randlv/equilibrium.hpp"
#include "randlv/experiments.hpp"
#include "randlv/heuristics.hpp"
#include "randlv/lcp.hpp"
#include "randlv/random_ensembles.hpp"

namespace randlv {

using json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline json spectrum_json(const InteractionMatrix& b, const SpectralReport& r) {
  json j{{"n", b.params.n},
         {"alpha", b.params.alpha},
         {"mu", b.params.mu},
         {"dist", to_string(b.params.dist)},
         {"seed", b.params.seed},
         {"lambda_max_sym", r.lambda_max_sym},
         {"predicted", r.predicted_lambda_max},
         {"outlier_regime", r.outlier_regime}};
  if (r.spectral_radius) j["spectral_radius"] = *r.spectral_radius;
  return j;
}

inline json lcp_json(const LcpSolution& s) {
  json j{{"status", to_string(s.status)}, {"pivots", s.pivots}, {"support", s.support}};
  if (s.solved()) {
    j["z"] = to_std(s.z);
    j["w"] = to_std(s.w);
  } else {
    j["z"] = json::array();
    j["w"] = json::array();
  }
  return j;
}

inline json equilibrium_json(const Equilibrium& eq) {
  json j{{"n", eq.source.n},
         {"alpha", eq.source.alpha},
         {"mu", eq.source.mu},
         {"dist", to_string(eq.source.dist)},
         {"seed", eq.source.seed},
         {"status", to_string(eq.solver_status)},
         {"pivots", eq.pivots},
         {"admissible", eq.admissible}};
  if (!eq.admissible) j["warning"] = "outside admissible region: equilibrium uniqueness and stability not guaranteed";
  if (eq.solved()) {
    const auto st = survivor_stats(eq);
    j["x_star"] = to_std(eq.x_star);
    j["p_hat"] = st.p_hat;
    j["m_hat"] = st.m_hat;
    j["sigma_hat"] = st.sigma_hat;
    j["survivors"] = st.survivors;
  }
  return j;
}

inline json diversity_json(const DiversityReport& d) {
  return {{"shannon", d.shannon}, {"hill1", d.hill1}, {"positive_count", d.positive_count}};
}

inline void write_heuristic_header(std::ostream& out) { out << "alpha,mu,p_star,m_star,sigma_star,delta_star,residual\n"; }

inline void write_heuristic_row(std::ostream& out, const HeuristicSolution& s) {
  out << fmt_num(s.alpha) << ',' << fmt_num(s.mu) << ',' << fmt_num(s.p_star) << ',' << fmt_num(s.m_star) << ','
      << fmt_num(s.sigma_star) << ',' << fmt_num(s.delta_star) << ',' << fmt_num(s.residual_norm) << '\n';
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "time";
  for (Eigen::Index k = 0; k < traj.states.cols(); ++k) out << ",x_" << (k + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < traj.size(); ++i) {
    out << fmt_num(traj.times[static_cast<std::size_t>(i)]);
    for (Eigen::Index k = 0; k < traj.states.cols(); ++k) out << ',' << fmt_num(traj.states(i, k));
    out << '\n';
  }
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "alpha,mu,trials_used,failures,flagged,"
         "p_hat_mean,p_hat_ci_low,p_hat_ci_high,m_hat_mean,m_hat_ci_low,m_hat_ci_high,"
         "sigma_hat_mean,sigma_hat_ci_low,sigma_hat_ci_high,hill_mean,hill_ci_low,hill_ci_high,"
         "p_star,m_star,sigma_star,delta_star,hill_theory\n";
  for (const auto& rec : r.records) {
    out << fmt_num(rec.alpha) << ',' << fmt_num(rec.mu) << ',' << rec.trials_used << ',' << rec.failures << ','
        << (rec.flagged ? 1 : 0);
    for (const auto* s : {&rec.p_hat, &rec.m_hat, &rec.sigma_hat, &rec.hill}) {
      out << ',' << fmt_num(s->mean) << ',' << fmt_num(s->ci_low) << ',' << fmt_num(s->ci_high);
    }
    out << ',' << fmt_num(rec.theory.p_star) << ',' << fmt_num(rec.theory.m_star) << ','
        << fmt_num(rec.theory.sigma_star) << ',' << fmt_num(rec.theory.delta_star) << ',' << fmt_num(rec.hill_theory)
        << '\n';
  }
}

inline void write_histogram_csv(std::ostream& out, const HistogramResult& h) {
  out << "bin_low,bin_high,count,empirical_density,theory_density\n";
  for (const auto& b : h.bins) {
    out << fmt_num(b.lo) << ',' << fmt_num(b.hi) << ',' << b.count << ',' << fmt_num(b.empirical_density) << ','
        << fmt_num(b.theory_density) << '\n';
  }
}

inline void write_timeseries_csv(std::ostream& out, const TimeseriesTable& t) {
  out << "time,mu,hill_mean,q05,q25,q50,q75,q95\n";
  for (std::size_t i = 0; i < t.mean.size(); ++i) {
    out << fmt_num(t.times[i]) << ',' << fmt_num(t.mu) << ',' << fmt_num(t.mean[i]);
    for (double q : t.quantiles[i]) out << ',' << fmt_num(q);
    out << '\n';
  }
}

inline json config_json(const CampaignConfig& c) {
  return {{"scenario", to_string(c.scenario)},
          {"n", c.n},
          {"trials", c.trials},
          {"seed", c.base_seed},
          {"alpha", c.alphas},
          {"mu", c.mus},
          {"dist", to_string(c.dist)},
          {"bins", c.bins},
          {"alpha1", c.alpha1},
          {"alpha2", c.alpha2},
          {"t0", c.t0},
          {"t_end", c.t_end},
          {"dt", c.dt},
          {"stride", c.stride}};
}

}  // namespace randlv
