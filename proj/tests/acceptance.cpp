// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Each check writes its raw numbers under a work directory; the last check
// reruns everything into a second directory and compares the files byte for byte.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "randlv/campaign.hpp"
#include "randlv/dynamics.hpp"
#include "randlv/equilibrium.hpp"
#include "randlv/heuristics.hpp"
#include "randlv/lcp.hpp"
#include "randlv/report.hpp"
#include "randlv/rng.hpp"

using namespace randlv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Check {
  int id;
  std::string name;
  std::function<Outcome(const fs::path&)> run;
};

std::ofstream open(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::string num(double v) { return fmt_num(v); }

Outcome top_eigenvalue_mean(const fs::path& dir, const std::string& file, double mu, double lo, double hi) {
  auto out = open(dir / file);
  out << "seed,lambda_max\n";
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto b = sample_interaction_matrix(1000, std::numbers::sqrt2, mu, EntryDist::gaussian, seed);
    const double lambda = symmetrized_top_eigenvalue(b).lambda_max_sym;
    out << seed << ',' << num(lambda) << '\n';
    sum += lambda;
  }
  const double mean = sum / 10.0;
  return {mean >= lo && mean <= hi, "mean " + num(mean) + " in [" + num(lo) + ", " + num(hi) + "]"};
}

CampaignConfig sweep_config(int n, int trials, std::vector<double> alphas, std::vector<double> mus, std::uint64_t seed) {
  CampaignConfig cfg;
  cfg.n = n;
  cfg.trials = trials;
  cfg.alphas = std::move(alphas);
  cfg.mus = std::move(mus);
  cfg.base_seed = seed;
  cfg.validate();
  return cfg;
}

Outcome spectral_outlier(const fs::path& dir) { return top_eigenvalue_mean(dir, "c01_outlier.csv", 1.5, 3.17, 3.50); }

Outcome semicircle_edge(const fs::path& dir) { return top_eigenvalue_mean(dir, "c02_edge.csv", 0.0, 1.90, 2.10); }

Outcome heuristic_value(const fs::path& dir) {
  const auto s = solve_heuristic_system(1.5, 0.0);
  auto out = open(dir / "c03_heuristic.csv");
  write_heuristic_header(out);
  write_heuristic_row(out, s);
  return {std::abs(s.p_star - 0.87) <= 0.02, "p* " + num(s.p_star)};
}

Outcome theory_vs_monte_carlo(const fs::path& dir) {
  const auto res = run_equilibrium_sweep(sweep_config(500, 200, {1.5, 2.0, 2.5, 3.0}, {0.0}, 20240501));
  auto out = open(dir / "c04_sweep.csv");
  write_sweep_csv(out, res);
  bool ok = true;
  double worst_p = 0.0, worst_m = 0.0, worst_s = 0.0;
  for (const auto& r : res.records) {
    const double dp = std::abs(r.p_hat.mean - r.theory.p_star);
    const double dm = std::abs(r.m_hat.mean - r.theory.m_star);
    const double ds = std::abs(r.sigma_hat.mean - r.theory.sigma_star);
    worst_p = std::max(worst_p, dp);
    worst_m = std::max(worst_m, dm);
    worst_s = std::max(worst_s, ds);
    ok = ok && dp <= 0.02 && dm <= 0.05 && ds <= 0.05 && r.trials_used > 0;
  }
  return {ok, "max |dp| " + num(worst_p) + ", |dm| " + num(worst_m) + ", |dsigma| " + num(worst_s)};
}

Outcome mu_flatness(const fs::path& dir) {
  const auto res = run_equilibrium_sweep(sweep_config(500, 200, {2.0}, {-0.4, 0.0, 0.4}, 20240502));
  auto out = open(dir / "c05_mu_sweep.csv");
  write_sweep_csv(out, res);
  double lo = 1.0, hi = 0.0;
  for (const auto& r : res.records) {
    lo = std::min(lo, r.p_hat.mean);
    hi = std::max(hi, r.p_hat.mean);
  }
  return {hi - lo <= 0.02, "spread of mean p " + num(hi - lo)};
}

Outcome lcp_oracle(const fs::path& dir) {
  auto out = open(dir / "c06_lcp.csv");
  out << "n,instance,support,pivots\n";
  int mismatches = 0, rays = 0, total = 0;
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (int k = 0; k < 50; ++k) {
      Rng rng = Rng::stream(777, static_cast<std::uint64_t>(n * 1000 + k));
      Matrix g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
      Vector q(n);
      for (int i = 0; i < n; ++i) q(i) = rng.normal();
      double c = 0.5;
      Matrix m = Matrix::Identity(n, n) + c * g;
      while (!is_p_matrix(m)) {
        c *= 0.5;
        m = Matrix::Identity(n, n) + c * g;
      }
      const LcpProblem prob{m, q};
      const auto sol = lemke_solve(prob);
      const auto oracle = brute_force_solve(prob);
      ++total;
      if (sol.status == LcpStatus::ray_termination) ++rays;
      if (!sol.solved() || oracle.solutions.size() != 1 || oracle.solutions[0].support != sol.support) {
        ++mismatches;
      } else {
        const double err = (oracle.solutions[0].z - sol.z).lpNorm<Eigen::Infinity>();
        worst = std::max(worst, err);
        if (err > 1e-8) ++mismatches;
      }
      out << n << ',' << k << ',';
      for (std::size_t i = 0; i < sol.support.size(); ++i) out << (i ? " " : "") << sol.support[i];
      out << ',' << sol.pivots << '\n';
    }
  }
  return {mismatches == 0 && rays == 0, std::to_string(total) + " instances, " + std::to_string(mismatches) +
                                            " mismatches, " + std::to_string(rays) + " ray terminations, max |dz| " +
                                            num(worst)};
}

Outcome dynamics_consistency(const fs::path& dir) {
  auto out = open(dir / "c07_dynamics.csv");
  out << "seed,err_constant,err_step,extinct_after\n";
  const double t0 = 200.0;
  const double t_end = 1200.0;
  bool constant_ok = true;
  int converged_after = 0, with_extinction = 0;
  double worst_before = 0.0, worst_after = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto base = std::make_shared<const Matrix>(sample_standardized(10, EntryDist::gaussian, seed));
    const auto eq1 = compute_equilibrium(sample_interaction_matrix(10, 2.5, 0.0, EntryDist::gaussian, seed));
    const auto eq2 = compute_equilibrium(sample_interaction_matrix(10, 1.5, 0.0, EntryDist::gaussian, seed));

    const auto flat = integrate_lv(InteractionSchedule::constant(base, 2.5, 0.0), Vector::Ones(10), 200.0, 0.01);
    const double e1 = (flat.final_state() - eq1.x_star).lpNorm<Eigen::Infinity>();

    const auto step = integrate_lv(InteractionSchedule::step(base, 2.5, 1.5, t0, 0.0), Vector::Ones(10), t_end, 0.01,
                                   {.stride = 1000});
    const double e2 = (step.final_state() - eq2.x_star).lpNorm<Eigen::Infinity>();
    const int extinct = static_cast<int>((eq2.x_star.array() == 0.0).count());

    worst_before = std::max(worst_before, e1);
    worst_after = std::max(worst_after, e2);
    constant_ok = constant_ok && e1 <= 1e-4;
    converged_after += e2 <= 1e-4;
    with_extinction += e2 <= 1e-4 && extinct > 0;
    out << seed << ',' << num(e1) << ',' << num(e2) << ',' << extinct << '\n';
  }
  return {constant_ok && converged_after == 10 && with_extinction > 5,
          "max err at alpha 2.5 " + num(worst_before) + ", after step " + num(worst_after) + ", seeds with extinction " +
              std::to_string(with_extinction) + "/10"};
}

Outcome survivor_distribution(const fs::path& dir) {
  CampaignConfig a;
  a.scenario = Scenario::histogram;
  a.n = 2000;
  a.trials = 5;
  a.base_seed = 20240508;
  a.alphas = {2.0};
  a.mus = {0.2};
  a.dist = EntryDist::gaussian;
  CampaignConfig b = a;
  b.alphas = {std::sqrt(3.0)};
  b.mus = {0.0};
  b.dist = EntryDist::uniform;
  const auto ha = run_survivor_histogram(a);
  const auto hb = run_survivor_histogram(b);
  auto oa = open(dir / "c08_histogram_gaussian.csv");
  write_histogram_csv(oa, ha);
  auto ob = open(dir / "c08_histogram_uniform.csv");
  write_histogram_csv(ob, hb);
  return {ha.ks < 0.05 && hb.ks < 0.05, "KS gaussian " + num(ha.ks) + ", uniform " + num(hb.ks)};
}

Outcome truncated_moment_identities(const fs::path& dir) {
  auto out = open(dir / "c09_moments.csv");
  out << "delta,mean,second,quad_mean,quad_second\n";
  double worst = 0.0;
  for (double delta : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0}) {
    const double mass = testing::gauss_integral_above([](double) { return 1.0; }, -delta);
    const double first = testing::gauss_integral_above([](double z) { return z; }, -delta) / mass;
    const double second = testing::gauss_integral_above([](double z) { return z * z; }, -delta) / mass;
    const auto tm = truncated_moments(delta);
    worst = std::max({worst, std::abs(tm.mean - first), std::abs(tm.second - second)});
    out << num(delta) << ',' << num(tm.mean) << ',' << num(tm.second) << ',' << num(first) << ',' << num(second) << '\n';
  }
  return {worst <= 1e-10, "max deviation " + num(worst)};
}

Outcome hill_approximation_check(const fs::path& dir) {
  const auto res = run_equilibrium_sweep(sweep_config(100, 100, {2.0, 3.0, 4.0}, {0.0}, 20240510));
  auto out = open(dir / "c10_hill.csv");
  write_sweep_csv(out, res);
  double worst = 0.0;
  for (const auto& r : res.records) worst = std::max(worst, std::abs(r.hill_theory - r.hill.mean) / r.hill.mean);
  return {worst <= 0.05, "max relative gap " + num(worst)};
}

Outcome rk4_order(const fs::path& dir) {
  const auto base = std::make_shared<const Matrix>(Matrix::Zero(1, 1));
  const auto sched = InteractionSchedule::constant(base, 2.0, 0.0);
  auto max_err = [&](double dt) {
    const auto traj = integrate_lv(sched, Vector::Constant(1, 0.1), 10.0, dt, {.stride = 1});
    double err = 0.0;
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
      const double t = traj.times[static_cast<std::size_t>(i)];
      err = std::max(err, std::abs(traj.states(i, 0) - 1.0 / (1.0 + 9.0 * std::exp(-t))));
    }
    return err;
  };
  const double coarse = max_err(0.1);
  const double fine = max_err(0.05);
  const double ratio = coarse / fine;
  auto out = open(dir / "c11_rk4.csv");
  out << "dt,max_error\n0.1," << num(coarse) << "\n0.05," << num(fine) << '\n';
  return {ratio >= 12.0 && ratio <= 20.0, "error ratio " + num(ratio)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "randlv_acceptance";
  fs::remove_all(root);
  const fs::path first = root / "first";
  const fs::path second = root / "second";
  fs::create_directories(first);
  fs::create_directories(second);

  const std::vector<Check> checks{
      {1, "spectral outlier", spectral_outlier},
      {2, "semicircle edge", semicircle_edge},
      {3, "heuristic value", heuristic_value},
      {4, "theory vs monte carlo", theory_vs_monte_carlo},
      {5, "mu flatness of p", mu_flatness},
      {6, "lcp oracle equivalence", lcp_oracle},
      {7, "dynamics vs lcp", dynamics_consistency},
      {8, "survivor distribution", survivor_distribution},
      {9, "truncated moments", truncated_moment_identities},
      {10, "hill approximation", hill_approximation_check},
      {11, "rk4 order", rk4_order},
  };

  auto timed = [](const Check& c, const fs::path& dir) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(dir);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.1f s)", secs);
    o.detail += buf;
    return o;
  };

  int failures = 0;
  for (const auto& c : checks) {
    const auto o = timed(c, first);
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << o.detail
              << std::endl;
  }

  // 12: rerun every check with the same seeds, plus a campaign with a different thread count.
  bool identical = true;
  int compared = 0;
  std::string first_diff;
  for (const auto& c : checks) timed(c, second);
  {
    CampaignConfig cfg = sweep_config(120, 8, {1.75, 2.5}, {-0.2, 0.2}, 99);
    cfg.threads = 1;
    run_campaign(cfg, first / "campaign");
    cfg.threads = 4;
    run_campaign(cfg, second / "campaign");
  }
  for (const auto& entry : fs::recursive_directory_iterator(first)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), first);
    ++compared;
    if (slurp(entry.path()) != slurp(second / rel)) {
      identical = false;
      if (first_diff.empty()) first_diff = rel.string();
    }
  }
  const bool pass12 = identical && compared > 0;
  failures += !pass12;
  std::cout << (pass12 ? "PASS" : "FAIL") << " criterion 12 determinism: " << compared << " output files compared"
            << (first_diff.empty() ? "" : ", first difference in " + first_diff) << std::endl;

  fs::remove_all(root);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
