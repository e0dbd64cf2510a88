#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "oracles.hpp"
#include "randlv/diversity.hpp"
#include "randlv/equilibrium.hpp"
#include "randlv/heuristics.hpp"

using namespace randlv;
namespace oracle = randlv::testing;

namespace {

// Reduced route: eliminating m and sigma leaves
//   Phi(delta) (1 + delta^2) + delta phi(delta) = alpha^2,
// then p = Phi(delta), g = 1 + E[Z | Z > -delta] / delta, m = g / (1 - mu p g),
// sigma = alpha (1 + mu p m) / (delta sqrt p).
struct Reduced {
  double p, m, sigma, delta;
};

Reduced reduced_solution(double alpha, double mu) {
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  const double delta = oracle::bisect(
      [&](double d) { return cdf(d) * (1.0 + d * d) + d * oracle::gauss_density(d) - alpha * alpha; }, 0.0, 100.0);
  const double p = cdf(delta);
  const double g = 1.0 + oracle::gauss_density(delta) / p / delta;
  const double m = g / (1.0 - mu * p * g);
  return {p, m, alpha * (1.0 + mu * p * m) / (delta * std::sqrt(p)), delta};
}

// Unit panels keep adaptive Simpson from stepping over a narrow bump.
double panel_integral(const std::function<double(double)>& f, double hi) {
  double total = 0.0;
  for (double a = 0.0; a < hi; a += 1.0) total += oracle::adaptive_simpson(f, a, a + 1.0, 1e-14);
  return total;
}

}  // namespace

TEST(StdNormalQuantile, Examples) {
  EXPECT_EQ(std_normal_quantile(0.5), 0.0);
  EXPECT_NEAR(std_normal_quantile(std_normal_cdf(1.0)), 1.0, 1e-9);
  const double bisected = oracle::bisect([](double x) { return oracle::quad_cdf(x) - 0.975; }, 0.0, 5.0, 80);
  EXPECT_NEAR(bisected, 1.959964, 1e-6);
  EXPECT_NEAR(std_normal_quantile(0.975), 1.959964, 1e-6);
  EXPECT_NEAR(std_normal_quantile(0.975), 1.95996398454005423, 1e-12);
}

TEST(StdNormalQuantile, AgreesWithBisectionAcrossRange) {
  for (double p : {1e-300, 1e-100, 1e-12, 1e-6, 0.001, 0.02, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575, 0.999, 1 - 1e-6}) {
    const double ref = oracle::bisect([p](double x) { return std_normal_cdf(x) - p; }, -40.0, 40.0);
    EXPECT_NEAR(std_normal_quantile(p), ref, 1e-9) << "p = " << p;
  }
}

TEST(StdNormalQuantile, RejectsOutsideUnitInterval) {
  EXPECT_THROW(std_normal_quantile(0.0), DomainError);
  EXPECT_THROW(std_normal_quantile(1.0), DomainError);
  EXPECT_THROW(std_normal_quantile(-0.2), DomainError);
  EXPECT_THROW(std_normal_quantile(std::nan("")), DomainError);
}

TEST(TruncatedMoments, NoTruncationLimit) {
  const auto tm = truncated_moments(40.0);
  EXPECT_NEAR(tm.mean, 0.0, 1e-12);
  EXPECT_NEAR(tm.second, 1.0, 1e-12);
  EXPECT_NEAR(tm.tail_prob, 1.0, 1e-12);
}

TEST(TruncatedMoments, FrozenValues) {
  // Values from the quadrature oracle below, frozen to 16 digits.
  auto tm = truncated_moments(0.0);
  EXPECT_NEAR(tm.mean, 0.7978845608028654, 1e-12);
  EXPECT_NEAR(tm.mean, std::sqrt(2.0 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(tm.second, 1.0, 1e-15);
  tm = truncated_moments(1.0);
  EXPECT_NEAR(tm.mean, 0.2875999709391784, 1e-12);
  EXPECT_NEAR(tm.second, 0.7124000290608216, 1e-12);
}

TEST(TruncatedMoments, ClosedFormsMatchQuadrature) {
  for (double delta : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0}) {
    const double mass = oracle::gauss_integral_above([](double) { return 1.0; }, -delta);
    const double first = oracle::gauss_integral_above([](double z) { return z; }, -delta) / mass;
    const double second = oracle::gauss_integral_above([](double z) { return z * z; }, -delta) / mass;
    const auto tm = truncated_moments(delta);
    EXPECT_NEAR(tm.tail_prob, mass, 1e-10) << delta;
    EXPECT_NEAR(tm.mean, first, 1e-10) << delta;
    EXPECT_NEAR(tm.second, second, 1e-10) << delta;
    EXPECT_GE(tm.second, tm.mean * tm.mean);
  }
}

TEST(TruncatedMoments, GuardsTotalTruncation) { EXPECT_THROW(truncated_moments(-40.0), DomainError); }

TEST(SolveHeuristicSystem, StrongInteractionValue) {
  const auto s = solve_heuristic_system(1.5, 0.0);
  EXPECT_NEAR(s.p_star, 0.87, 0.02);
  EXPECT_LE(s.residual_norm, 1e-10);
}

TEST(SolveHeuristicSystem, WeakInteractionLimit) {
  const auto s = solve_heuristic_system(50.0, 0.0);
  EXPECT_NEAR(s.p_star, 1.0, 0.05);
  EXPECT_NEAR(s.m_star, 1.0, 0.05);
  EXPECT_NEAR(s.sigma_star, 1.0, 0.05);
}

TEST(SolveHeuristicSystem, CenteredReduction) {
  const auto full = solve_heuristic_system(2.0, 0.0);
  const auto centered = solve_centered_system(2.0);
  EXPECT_NEAR(full.p_star, centered.p_star, 1e-8);
  EXPECT_NEAR(full.sigma_star, centered.sigma_star, 1e-8);
}

TEST(SolveHeuristicSystem, RejectsNonAdmissible) {
  EXPECT_THROW(solve_heuristic_system(1.2, 0.0), DomainError);
  EXPECT_THROW(solve_heuristic_system(2.0, 0.9), DomainError);
}

TEST(SolveHeuristicSystem, ResidualsVanishInOriginalForm) {
  for (double alpha : {1.5, 1.75, 2.0, 2.5, 3.0}) {
    for (double mu : {-0.4, 0.0, 0.2, 0.4}) {
      if (!is_admissible(alpha, mu)) continue;
      const auto s = solve_heuristic_system(alpha, mu);
      for (double r : heuristic_residuals(alpha, mu, s.p_star, s.m_star, s.sigma_star)) {
        EXPECT_LE(std::abs(r), 1e-10) << alpha << ", " << mu;
      }
      EXPECT_NEAR(std_normal_quantile(1.0 - s.p_star), -s.delta_star, 1e-9);
      EXPECT_NEAR(s.delta_star, survival_threshold(alpha, mu, s.p_star, s.m_star, s.sigma_star), 1e-9);
    }
  }
}

TEST(SolveHeuristicSystem, AgreesWithReducedRoute) {
  for (double alpha : {1.5, 2.0, 3.0, 10.0}) {
    for (double mu : {-0.4, 0.0, 0.3}) {
      const auto s = solve_heuristic_system(alpha, mu);
      const auto r = reduced_solution(alpha, mu);
      EXPECT_NEAR(s.p_star, r.p, 1e-8) << alpha << ", " << mu;
      EXPECT_NEAR(s.m_star, r.m, 1e-8) << alpha << ", " << mu;
      EXPECT_NEAR(s.sigma_star, r.sigma, 1e-8) << alpha << ", " << mu;
    }
  }
}

TEST(SolveHeuristicSystem, FrozenReducedValues) {
  // Reduced route evaluated at 30 digits.
  const auto s = solve_heuristic_system(1.5, 0.0);
  EXPECT_NEAR(s.p_star, 0.873315282855456731, 1e-9);
  EXPECT_NEAR(s.m_star, 1.208304643668745552, 1e-9);
  EXPECT_NEAR(s.sigma_star, 1.405277962403659304, 1e-9);
}

TEST(SolveHeuristicSystem, BothStartsReachOneRoot) {
  for (double alpha : {1.5, 2.0, 3.0}) {
    for (double mu : {-0.4, 0.0, 0.4}) {
      EXPECT_EQ(heuristic_roots(alpha, mu).size(), 1u) << alpha << ", " << mu;
    }
  }
}

TEST(SolveHeuristicSystem, MonotoneInAlpha) {
  HeuristicSolution prev = solve_heuristic_system(1.5, 0.0);
  for (double alpha = 1.75; alpha <= 4.0 + 1e-12; alpha += 0.25) {
    const auto s = solve_heuristic_system(alpha, 0.0);
    EXPECT_GE(s.p_star, prev.p_star) << alpha;
    EXPECT_LE(s.sigma_star, prev.sigma_star) << alpha;
    EXPECT_LE(s.m_star, prev.m_star) << alpha;
    prev = s;
  }
}

TEST(SolveHeuristicSystem, ProportionIgnoresDrift) {
  const double p0 = solve_heuristic_system(2.0, 0.0).p_star;
  for (double mu : {-0.4, 0.4}) EXPECT_LT(std::abs(solve_heuristic_system(2.0, mu).p_star - p0), 1e-3);
}

TEST(SolveCenteredSystem, Examples) {
  EXPECT_NEAR(solve_centered_system(1.5).p_star, 0.87, 0.02);
  // sigma ~ 1 reduces the first equation to alpha = delta sqrt(Phi(delta)).
  const double delta = oracle::bisect([](double d) { return d * std::sqrt(std_normal_cdf(d)) - 10.0; }, 0.0, 50.0);
  EXPECT_GT(std_normal_cdf(delta), 0.99);
  EXPECT_GT(solve_centered_system(10.0).p_star, 0.99);
  EXPECT_THROW(solve_centered_system(1.4), DomainError);
}

TEST(SurvivorDensity, SupportAndNormalization) {
  const auto s = solve_heuristic_system(2.0, 0.2);
  EXPECT_EQ(survivor_density(-1.0, s), 0.0);
  EXPECT_EQ(survivor_density(0.0, s), 0.0);
  const double mass = panel_integral([&](double y) { return survivor_density(y, s); }, 20.0);
  EXPECT_NEAR(mass, 1.0, 1e-8);
}

TEST(SurvivorDensity, NormalizedOverAdmissibleGrid) {
  for (double alpha : {1.5, 2.0, 3.0, 5.0}) {
    for (double mu : {-0.4, 0.0, 0.4}) {
      if (!is_admissible(alpha, mu)) continue;
      const auto s = solve_heuristic_system(alpha, mu);
      const double mass = panel_integral([&](double y) { return survivor_density(y, s); }, 30.0);
      EXPECT_NEAR(mass, 1.0, 1e-8) << alpha << ", " << mu;
      const double partial = panel_integral([&](double y) { return survivor_density(y, s); }, 1.0);
      EXPECT_NEAR(survivor_cdf(1.0, s), partial, 1e-9);
    }
  }
}

TEST(SurvivorDensity, MeanAndSecondMomentMatchSolution) {
  const auto s = solve_heuristic_system(1.8, 0.3);
  const double m1 = panel_integral([&](double y) { return y * survivor_density(y, s); }, 30.0);
  const double m2 = panel_integral([&](double y) { return y * y * survivor_density(y, s); }, 30.0);
  EXPECT_NEAR(m1, s.m_star, 1e-8);
  EXPECT_NEAR(std::sqrt(m2), s.sigma_star, 1e-8);
}

TEST(HillApproximation, Examples) {
  HeuristicSolution homogeneous;
  homogeneous.p_star = 0.8;
  homogeneous.m_star = 1.3;
  homogeneous.sigma_star = 1.3;
  EXPECT_NEAR(hill_approximation(250, homogeneous), 200.0, 1e-12);
  EXPECT_NEAR(hill_approximation(100, solve_heuristic_system(50.0, 0.0)), 100.0, 0.1);
}

TEST(HillApproximation, CloseToSimulatedHillNumber) {
  const auto s = solve_heuristic_system(2.0, 0.0);
  double sum = 0.0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    sum += hill_number(compute_equilibrium(sample_interaction_matrix(100, 2.0, 0.0, EntryDist::gaussian, 900u + t)).x_star);
  }
  const double mean = sum / trials;
  EXPECT_LE(std::abs(hill_approximation(100, s) - mean) / mean, 0.05);
}
