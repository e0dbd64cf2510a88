#pragma once

// `lv` command-line front end. Kept in a header so tests can drive dispatch()
// in-process with their own streams.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "randlv/campaign.hpp"
#include "randlv/diversity.hpp"
#include "randlv/dynamics.hpp"
#include "randlv/equilibrium.hpp"
#include "randlv/heuristics.hpp"
#include "randlv/lcp.hpp"
#include "randlv/random_ensembles.hpp"
#include "randlv/report.hpp"

namespace randlv::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kNumericalError = 2 };

struct GlobalOptions {
  std::string format = "json";
  std::string output;  // empty: stdout
  std::uint64_t seed = 0;
  int verbosity = 0;
  int threads = 0;
};

inline std::vector<std::vector<double>> read_numeric_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& cell : detail::split(line, ',')) row.push_back(detail::parse_double(cell, "CSV cell"));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Matrix rows followed by one row holding q.
inline LcpProblem read_lcp_csv(std::istream& in) {
  const auto rows = read_numeric_rows(in);
  if (rows.size() < 2) throw ConfigError("LCP CSV needs at least one matrix row and the q row");
  const auto n = rows.size() - 1;
  LcpProblem prob{Matrix(n, n), Vector(n)};
  for (std::size_t i = 0; i <= n; ++i) {
    if (rows[i].size() != n) {
      throw ConfigError("LCP CSV row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                        " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i < n) prob.M(i, j) = rows[i][j];
      else prob.q(j) = rows[i][j];
    }
  }
  return prob;
}

class Output {
 public:
  Output(const GlobalOptions& g, std::ostream& fallback) {
    if (!g.output.empty() && g.output != "-") {
      file_ = std::make_unique<std::ofstream>(g.output, std::ios::binary);
      if (!*file_) throw ConfigError("cannot open output file " + g.output);
    }
    out_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& stream() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

inline std::unique_ptr<std::istream> open_input(const std::string& path, std::istream& stdin_stream,
                                                std::istream*& chosen) {
  if (path.empty() || path == "-") {
    chosen = &stdin_stream;
    return nullptr;
  }
  auto f = std::make_unique<std::ifstream>(path);
  if (!*f) throw ConfigError("cannot read " + path);
  chosen = f.get();
  return f;
}

/// Parse argv, run the selected subcommand and return the process exit code:
/// 0 success, 1 usage or domain error, 2 numerical failure.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr,
                    std::istream& in = std::cin) {
  CLI::App app{"Equilibria, survivor statistics and dynamics of large random Lotka-Volterra systems", "lv"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--output", g.output, "Output file (default stdout)");
  app.add_option("--seed", g.seed, "Seed for every random draw");
  app.add_flag("-v,--verbose", g.verbosity, "Log progress to stderr");
  app.add_option("--threads", g.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

  int n = 100;
  double alpha = 2.0;
  double mu = 0.0;
  std::string dist = "gaussian";
  auto add_ensemble = [&](CLI::App* sub) {
    sub->add_option("--n", n, "Number of species")->check(CLI::PositiveNumber);
    sub->add_option("--alpha", alpha, "Interaction strength normalizer (> 0)");
    sub->add_option("--mu", mu, "Interaction drift");
    sub->add_option("--dist", dist, "Entry law: gaussian, uniform, zero");
  };

  auto* spectrum = app.add_subcommand(
      "spectrum", "Top eigenvalue of B + B^T against its prediction (semicircle edge or drift outlier)");
  add_ensemble(spectrum);
  std::string eig_csv;
  bool radius = false;
  spectrum->add_option("--eigenvalues-csv", eig_csv, "Also write every eigenvalue of B + B^T to this CSV");
  spectrum->add_flag("--radius", radius, "Also report the spectral radius of B (dense, slow for large n)");

  auto* lcp = app.add_subcommand("lcp", "Solve LCP(M, q) by Lemke pivoting; input CSV holds M's rows then q");
  std::string lcp_input;
  int max_pivots = 0;
  lcp->add_option("--input", lcp_input, "CSV file, '-' for stdin")->default_str("-");
  lcp->add_option("--max-pivots", max_pivots, "Pivot budget (default 50 n)");

  auto* equilibrium = app.add_subcommand(
      "equilibrium", "Equilibrium x* via LCP(I - B, -1) with survivor statistics (p_hat, m_hat, sigma_hat)");
  add_ensemble(equilibrium);

  auto* heuristic = app.add_subcommand(
      "heuristic", "Solve the fixed-point system for (p*, m*, sigma*); grids give survivor-statistics sweeps");
  std::string alpha_grid = "2";
  std::string mu_grid = "0";
  heuristic->add_option("--alpha", alpha_grid, "alpha value or grid (a,b,c or start:stop:step)");
  heuristic->add_option("--mu", mu_grid, "mu value or grid");

  auto* dynamics = app.add_subcommand(
      "dynamics", "RK4 abundance trajectories, optionally with a step of alpha from alpha1 to alpha2 at t0");
  int dyn_n = 10;
  double alpha1 = 2.5;
  std::optional<double> alpha2;
  double t0 = 50.0;
  double t_end = 100.0;
  double dt = 0.01;
  int stride = 10;
  dynamics->add_option("--n", dyn_n, "Number of species")->check(CLI::PositiveNumber);
  dynamics->add_option("--alpha1", alpha1, "Interaction strength before t0");
  dynamics->add_option("--alpha2", alpha2, "Interaction strength from t0 on (omit for a constant schedule)");
  dynamics->add_option("--t0", t0, "Switch time");
  dynamics->add_option("--mu", mu, "Interaction drift");
  dynamics->add_option("--dist", dist, "Entry law: gaussian, uniform, zero");
  dynamics->add_option("--t-end", t_end, "Final time");
  dynamics->add_option("--dt", dt, "RK4 step (<= 0.1)");
  dynamics->add_option("--stride", stride, "Record every stride steps")->check(CLI::PositiveNumber);

  auto* diversity_cmd = app.add_subcommand("diversity", "Shannon index and Hill number of an abundance CSV row");
  std::string div_input;
  diversity_cmd->add_option("--input", div_input, "CSV file, '-' for stdin")->default_str("-");

  auto* campaign = app.add_subcommand(
      "campaign", "Monte Carlo campaign: equilibrium-sweep, histogram or diversity-timeseries");
  std::string config_path;
  std::string out_dir;
  campaign->add_option("--config", config_path, "key = value campaign file")->required();
  campaign->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kDomainError;
  }

  auto log = [&](const std::string& msg) {
    if (g.verbosity > 0) err << "lv: " << msg << '\n';
  };

  try {
    Output sink(g, out);
    std::ostream& os = sink.stream();

    if (spectrum->parsed()) {
      const auto b = sample_interaction_matrix(n, alpha, mu, parse_entry_dist(dist), g.seed);
      auto report = symmetrized_top_eigenvalue(b);
      log("lanczos iterations: " + std::to_string(report.iterations));
      if (radius) report.spectral_radius = spectral_radius(b.entries);
      if (!eig_csv.empty()) {
        std::ofstream f(eig_csv, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + eig_csv);
        f << "eigenvalue\n";
        for (double v : symmetric_eigenvalues(b.entries)) f << fmt_num(v) << '\n';
      }
      os << spectrum_json(b, report).dump() << '\n';
    } else if (lcp->parsed()) {
      std::istream* src = nullptr;
      auto holder = open_input(lcp_input, in, src);
      const auto prob = read_lcp_csv(*src);
      const auto sol = lemke_solve(prob, {max_pivots});
      os << lcp_json(sol).dump() << '\n';
      if (!sol.solved()) return kNumericalError;
    } else if (equilibrium->parsed()) {
      const auto b = sample_interaction_matrix(n, alpha, mu, parse_entry_dist(dist), g.seed);
      const auto eq = compute_equilibrium(b);
      if (!eq.admissible) err << "lv: warning: (alpha, mu) outside the admissible region\n";
      os << equilibrium_json(eq).dump() << '\n';
      if (!eq.solved()) return kNumericalError;
    } else if (heuristic->parsed()) {
      const auto alphas = parse_grid(alpha_grid, "alpha");
      const auto mus = parse_grid(mu_grid, "mu");
      const bool single = alphas.size() == 1 && mus.size() == 1;
      const bool as_json = g.format == "json" && app.get_option("--format")->count() > 0;
      json rows = json::array();
      if (!as_json) write_heuristic_header(os);
      for (double a : alphas) {
        for (double m : mus) {
          if (!is_admissible(a, m)) {
            if (single) throw DomainError("(alpha, mu) outside the admissible region");
            err << "lv: skipping non-admissible (" << fmt_num(a) << ", " << fmt_num(m) << ")\n";
            continue;
          }
          const auto s = solve_heuristic_system(a, m);
          if (as_json) {
            rows.push_back({{"alpha", s.alpha}, {"mu", s.mu}, {"p_star", s.p_star}, {"m_star", s.m_star},
                            {"sigma_star", s.sigma_star}, {"delta_star", s.delta_star}, {"residual", s.residual_norm}});
          } else {
            write_heuristic_row(os, s);
          }
        }
      }
      if (as_json) os << rows.dump() << '\n';
    } else if (dynamics->parsed()) {
      auto a = std::make_shared<const Matrix>(sample_standardized(dyn_n, parse_entry_dist(dist), g.seed));
      const auto schedule = alpha2 ? InteractionSchedule::step(a, alpha1, *alpha2, t0, mu)
                                   : InteractionSchedule::constant(a, alpha1, mu);
      const auto traj = integrate_lv(schedule, Vector::Ones(dyn_n), t_end, dt, {stride});
      write_trajectory_csv(os, traj);
    } else if (diversity_cmd->parsed()) {
      std::istream* src = nullptr;
      auto holder = open_input(div_input, in, src);
      const auto rows = read_numeric_rows(*src);
      if (rows.size() != 1) throw ConfigError("diversity input must be a single CSV row");
      for (double v : rows.front()) {
        if (v < 0.0) throw DomainError("abundances must be nonnegative");
      }
      os << diversity_json(diversity(rows.front())).dump() << '\n';
    } else if (campaign->parsed()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read " + config_path);
      auto cfg = parse_campaign_config(f);
      if (app.get_option("--threads")->count() > 0) cfg.threads = g.threads;
      if (app.get_option("--seed")->count() > 0) cfg.base_seed = g.seed;
      log("running " + to_string(cfg.scenario) + " with " + std::to_string(cfg.trials) + " trials");
      const auto manifest = run_campaign(cfg, out_dir);
      os << manifest.dump(2) << '\n';
    }
  } catch (const NumericalError& e) {
    err << "lv: numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const ConfigError& e) {
    err << "lv: " << e.what() << '\n';
    return kDomainError;
  } catch (const DomainError& e) {
    err << "lv: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "lv: " << e.what() << '\n';
    return kDomainError;
  }
  return kOk;
}

}  // namespace randlv::cli
