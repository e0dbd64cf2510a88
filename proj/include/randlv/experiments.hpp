#pragma once

// Seeded Monte Carlo campaigns: theory against empirics for the survivor
// statistics, pooled survivor histograms, and Hill-number time series under a
// step change of the interaction strength.
//
// Trial t of a campaign with base seed s draws its standardized matrix from
// stream s ^ t. Trials run on a worker pool and are reduced in trial order, so
// the output does not depend on the thread count.

#include <algorithm>
#include <array>
#include <exception>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "randlv/config.hpp"
#include "randlv/diversity.hpp"
#include "randlv/dynamics.hpp"
#include "randlv/equilibrium.hpp"
#include "randlv/heuristics.hpp"
#include "randlv/random_ensembles.hpp"

namespace randlv {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Evaluate fn(0..count-1) on `threads` workers; results keep index order.
template <class Fn>
auto parallel_map(int count, int threads, Fn&& fn) -> std::vector<decltype(fn(0))> {
  using Result = decltype(fn(0));
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(count));
  const int workers = std::max(1, std::min(resolve_threads(threads), count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) slots[static_cast<std::size_t>(i)].emplace(fn(i));
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (int i = next++; i < count; i = next++) slots[static_cast<std::size_t>(i)].emplace(fn(i));
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
            next = count;
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct SampleSummary {
  double mean = 0.0;
  double ci_low = 0.0;   // mean - 1.96 s / sqrt(k)
  double ci_high = 0.0;  // mean + 1.96 s / sqrt(k)
  double stddev = 0.0;
  int count = 0;
};

inline SampleSummary summarize(const std::vector<double>& xs) {
  SampleSummary s;
  s.count = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / s.count;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.stddev = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;
  const double half = 1.96 * s.stddev / std::sqrt(static_cast<double>(s.count));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

/// Linear-interpolation quantile of sorted data (type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// One grid point of an equilibrium sweep.
struct SweepRecord {
  double alpha = 0.0;
  double mu = 0.0;
  int trials_used = 0;
  int failures = 0;
  bool flagged = false;  // more than 10% of trials failed
  SampleSummary p_hat, m_hat, sigma_hat, hill;
  HeuristicSolution theory;
  double hill_theory = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
};

namespace detail {

struct TrialStats {
  bool ok = false;
  SurvivorStats stats;
  double hill = 0.0;
};

inline TrialStats equilibrium_trial(const Matrix& a, double alpha, double mu, const EnsembleParams& params) {
  TrialStats out;
  const auto eq = compute_equilibrium(scale_interactions(a, alpha, mu), params);
  if (!eq.solved()) return out;
  try {
    out.stats = survivor_stats(eq);
  } catch (const DomainError&) {
    return out;
  }
  out.hill = hill_number(eq.x_star);
  out.ok = true;
  return out;
}

inline void require_grid_admissible(const CampaignConfig& cfg) {
  for (double a : cfg.alphas) {
    for (double m : cfg.mus) require_admissible(a, m);
  }
}

}  // namespace detail

inline SweepResult run_equilibrium_sweep(const CampaignConfig& cfg) {
  cfg.validate();
  detail::require_grid_admissible(cfg);

  // Per trial: one standardized matrix reused at every grid point.
  using TrialRow = std::vector<detail::TrialStats>;
  const auto rows = parallel_map(cfg.trials, cfg.threads, [&](int t) {
    const std::uint64_t seed = cfg.base_seed ^ static_cast<std::uint64_t>(t);
    const Matrix a = sample_standardized(cfg.n, cfg.dist, seed);
    TrialRow row;
    for (double alpha : cfg.alphas) {
      for (double mu : cfg.mus) row.push_back(detail::equilibrium_trial(a, alpha, mu, {cfg.n, alpha, mu, cfg.dist, seed}));
    }
    return row;
  });

  SweepResult result;
  std::size_t cell = 0;
  for (double alpha : cfg.alphas) {
    for (double mu : cfg.mus) {
      std::vector<double> ps, ms, ss, hs;
      SweepRecord rec;
      rec.alpha = alpha;
      rec.mu = mu;
      for (const auto& row : rows) {
        const auto& tr = row[cell];
        if (!tr.ok) {
          ++rec.failures;
          continue;
        }
        ps.push_back(tr.stats.p_hat);
        ms.push_back(tr.stats.m_hat);
        ss.push_back(tr.stats.sigma_hat);
        hs.push_back(tr.hill);
      }
      rec.trials_used = static_cast<int>(ps.size());
      rec.flagged = rec.failures * 10 > cfg.trials;
      rec.p_hat = summarize(ps);
      rec.m_hat = summarize(ms);
      rec.sigma_hat = summarize(ss);
      rec.hill = summarize(hs);
      rec.theory = solve_heuristic_system(alpha, mu);
      rec.hill_theory = hill_approximation(cfg.n, rec.theory);
      result.records.push_back(rec);
      ++cell;
    }
  }
  return result;
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const auto k = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / k - f, f - static_cast<double>(i) / k});
  }
  return d;
}

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  double empirical_density = 0.0;
  double theory_density = 0.0;  // survivor density at the bin centre
};

struct HistogramResult {
  double alpha = 0.0;
  double mu = 0.0;
  std::vector<HistogramBin> bins;
  std::vector<double> survivors;  // pooled in trial order
  double ks = 0.0;
  int trials_used = 0;
  int failures = 0;
  HeuristicSolution theory;
};

inline HistogramResult run_survivor_histogram(const CampaignConfig& cfg) {
  cfg.validate();
  if (cfg.scenario != Scenario::histogram && (cfg.alphas.size() != 1 || cfg.mus.size() != 1)) {
    throw ConfigError("histogram needs a single alpha and mu");
  }
  detail::require_grid_admissible(cfg);
  const double alpha = cfg.alphas.front();
  const double mu = cfg.mus.front();

  const auto per_trial = parallel_map(cfg.trials, cfg.threads, [&](int t) -> std::optional<Vector> {
    const std::uint64_t seed = cfg.base_seed ^ static_cast<std::uint64_t>(t);
    const auto eq = compute_equilibrium(sample_interaction_matrix(cfg.n, alpha, mu, cfg.dist, seed));
    if (!eq.solved()) return std::nullopt;
    return eq.x_star;
  });

  HistogramResult res;
  res.alpha = alpha;
  res.mu = mu;
  for (const auto& x : per_trial) {
    if (!x) {
      ++res.failures;
      continue;
    }
    ++res.trials_used;
    for (double v : *x) {
      if (v > kSurvivalThreshold) res.survivors.push_back(v);
    }
  }
  if (res.survivors.empty()) throw NumericalError("histogram: no survivors collected");

  res.theory = solve_heuristic_system(alpha, mu);
  const double top = *std::max_element(res.survivors.begin(), res.survivors.end());
  const double width = top / cfg.bins;
  res.bins.resize(static_cast<std::size_t>(cfg.bins));
  for (int b = 0; b < cfg.bins; ++b) {
    auto& bin = res.bins[static_cast<std::size_t>(b)];
    bin.lo = b * width;
    bin.hi = (b + 1) * width;
    bin.theory_density = survivor_density(0.5 * (bin.lo + bin.hi), res.theory);
  }
  for (double v : res.survivors) {
    const auto b = std::min(static_cast<int>(v / width), cfg.bins - 1);
    ++res.bins[static_cast<std::size_t>(b)].count;
  }
  const auto total = static_cast<double>(res.survivors.size());
  for (auto& bin : res.bins) bin.empirical_density = bin.count / (total * width);
  res.ks = ks_statistic(res.survivors, [&](double y) { return survivor_cdf(y, res.theory); });
  return res;
}

inline constexpr std::array<double, 5> kTimeseriesQuantiles{0.05, 0.25, 0.5, 0.75, 0.95};

struct TimeseriesTable {
  double mu = 0.0;
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<std::array<double, 5>> quantiles;  // at kTimeseriesQuantiles
  int trials_used = 0;
  int failures = 0;
  double hill_theory_before = 0.0;  // hill_approximation at (alpha1, mu)
  double hill_theory_after = 0.0;   // hill_approximation at (alpha2, mu)
};

struct TimeseriesResult {
  std::vector<TimeseriesTable> tables;  // one per mu
};

inline TimeseriesResult run_diversity_timeseries(const CampaignConfig& cfg) {
  cfg.validate();
  for (double mu : cfg.mus) {
    detail::require_admissible(cfg.alpha1, mu);
    detail::require_admissible(cfg.alpha2, mu);
  }

  TimeseriesResult result;
  for (double mu : cfg.mus) {
    const auto runs = parallel_map(cfg.trials, cfg.threads, [&](int t) -> std::optional<std::vector<double>> {
      const std::uint64_t seed = cfg.base_seed ^ static_cast<std::uint64_t>(t);
      auto a = std::make_shared<const Matrix>(sample_standardized(cfg.n, cfg.dist, seed));
      const auto schedule = InteractionSchedule::step(a, cfg.alpha1, cfg.alpha2, cfg.t0, mu);
      try {
        const auto traj = integrate_lv(schedule, Vector::Ones(cfg.n), cfg.t_end, cfg.dt, {cfg.stride});
        std::vector<double> hills(traj.times.size());
        for (Eigen::Index i = 0; i < traj.size(); ++i) hills[static_cast<std::size_t>(i)] = hill_number(traj.state(i));
        return hills;
      } catch (const NumericalError&) {
        return std::nullopt;
      }
    });

    TimeseriesTable table;
    table.mu = mu;
    const auto steps = static_cast<std::int64_t>(std::llround(cfg.t_end / cfg.dt));
    for (std::int64_t k = 0; k <= steps; ++k) {
      if (k % cfg.stride == 0 || k == steps) table.times.push_back(static_cast<double>(k) * cfg.dt);
    }
    std::vector<const std::vector<double>*> ok;
    for (const auto& r : runs) {
      if (r) ok.push_back(&*r);
      else ++table.failures;
    }
    table.trials_used = static_cast<int>(ok.size());
    for (std::size_t i = 0; i < table.times.size() && !ok.empty(); ++i) {
      std::vector<double> column;
      column.reserve(ok.size());
      for (const auto* r : ok) column.push_back((*r)[i]);
      table.mean.push_back(summarize(column).mean);
      std::sort(column.begin(), column.end());
      std::array<double, 5> qs{};
      for (std::size_t j = 0; j < qs.size(); ++j) qs[j] = quantile_sorted(column, kTimeseriesQuantiles[j]);
      table.quantiles.push_back(qs);
    }
    table.hill_theory_before = hill_approximation(cfg.n, solve_heuristic_system(cfg.alpha1, mu));
    table.hill_theory_after = hill_approximation(cfg.n, solve_heuristic_system(cfg.alpha2, mu));
    result.tables.push_back(std::move(table));
  }
  return result;
}

}  // namespace randlv
