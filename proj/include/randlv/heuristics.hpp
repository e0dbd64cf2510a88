#pragma once

// Fixed-point prediction of the surviving-species statistics (p*, m*, sigma*)
// and the truncated-Gaussian law of surviving abundances.
//
// With c = 1 + mu p m and s = sigma sqrt(p) / alpha the system reads
//   sigma sqrt(p) Phi^-1(1 - p) + alpha c              = 0
//   c + s E[Z | Z > -delta]                            = m
//   c^2 + 2 c s E[Z | Z > -delta] + s^2 E[Z^2 | ...]   = sigma^2
// where delta = alpha c / (sigma sqrt(p)). The first equation is p = Phi(delta),
// so the solver iterates on (delta, m, sigma): p close to 1 stays representable
// for large alpha, where 1 - p underflows.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "randlv/error.hpp"
#include "randlv/newton.hpp"
#include "randlv/normal.hpp"
#include "randlv/random_ensembles.hpp"

namespace randlv {

struct HeuristicSolution {
  double p_star = 0.0;
  double m_star = 0.0;
  double sigma_star = 0.0;
  double delta_star = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
};

struct HeuristicGuess {
  double p = 0.99;
  double m = 1.0;
  double sigma = 1.0;
};

inline constexpr HeuristicGuess kDefaultGuess{0.99, 1.0, 1.0};
inline constexpr HeuristicGuess kFallbackGuess{0.7, 1.2, 1.2};

/// delta(p, m, sigma) = alpha (1 + mu p m) / (sigma sqrt p).
inline double survival_threshold(double alpha, double mu, double p, double m, double sigma) {
  return alpha * (1.0 + mu * p * m) / (sigma * std::sqrt(p));
}

/// The three residuals in their original (p, m, sigma) form. Needs 0 < p < 1.
inline std::array<double, 3> heuristic_residuals(double alpha, double mu, double p, double m, double sigma) {
  const double c = 1.0 + mu * p * m;
  const double s = sigma * std::sqrt(p) / alpha;
  const auto tm = truncated_moments(survival_threshold(alpha, mu, p, m, sigma));
  return {sigma * std::sqrt(p) * std_normal_quantile(1.0 - p) + alpha * c, c + s * tm.mean - m,
          c * c + 2.0 * c * s * tm.mean + s * s * tm.second - sigma * sigma};
}

namespace detail {

// Lower bound on delta mirrors p >= 1e-6.
inline const double kMinDelta = std_normal_quantile(1e-6);
inline constexpr double kMinPositive = 1e-6;

inline Eigen::Vector3d heuristic_residuals_delta(double alpha, double mu, const Eigen::Vector3d& v) {
  const double delta = v(0), m = v(1), sigma = v(2);
  const auto tm = truncated_moments(delta);
  const double p = tm.tail_prob;
  const double c = 1.0 + mu * p * m;
  const double s = sigma * std::sqrt(p) / alpha;
  return {alpha * c - sigma * std::sqrt(p) * delta, c + s * tm.mean - m,
          c * c + 2.0 * c * s * tm.mean + s * s * tm.second - sigma * sigma};
}

inline HeuristicSolution finish_solution(double alpha, double mu, const NewtonResult<3>& nr) {
  HeuristicSolution sol;
  sol.alpha = alpha;
  sol.mu = mu;
  sol.p_star = std_normal_cdf(nr.x(0));
  sol.m_star = nr.x(1);
  sol.sigma_star = nr.x(2);
  sol.delta_star = survival_threshold(alpha, mu, sol.p_star, sol.m_star, sol.sigma_star);
  sol.residual_norm = nr.residual.lpNorm<Eigen::Infinity>();
  sol.iterations = nr.iterations;
  return sol;
}

inline NewtonResult<3> run_heuristic_newton(double alpha, double mu, const HeuristicGuess& guess) {
  if (!(guess.p > 0.0 && guess.p < 1.0)) throw DomainError("initial p must lie in (0, 1)");
  const Eigen::Vector3d x0{std_normal_quantile(guess.p), guess.m, guess.sigma};
  auto project = [](Eigen::Vector3d v) {
    v(0) = std::max(v(0), kMinDelta);
    v(1) = std::max(v(1), kMinPositive);
    v(2) = std::max(v(2), kMinPositive);
    return v;
  };
  return damped_newton<3>([&](const Eigen::Vector3d& v) { return heuristic_residuals_delta(alpha, mu, v); }, x0,
                          project);
}

inline void require_admissible(double alpha, double mu) {
  if (!is_admissible(alpha, mu)) {
    throw DomainError("(alpha, mu) = (" + std::to_string(alpha) + ", " + std::to_string(mu) +
                      ") is outside the admissible region");
  }
}

}  // namespace detail

inline constexpr double kHeuristicTolerance = 1e-10;

/// Solve for (p*, m*, sigma*). Starts from `init` (default (0.99, 1, 1)) and
/// retries from (0.7, 1.2, 1.2) if that start does not converge.
inline HeuristicSolution solve_heuristic_system(double alpha, double mu,
                                                std::optional<HeuristicGuess> init = std::nullopt) {
  detail::require_admissible(alpha, mu);
  const std::vector<HeuristicGuess> starts = init ? std::vector{*init, kFallbackGuess}
                                                  : std::vector{kDefaultGuess, kFallbackGuess};
  double last = 0.0;
  for (const auto& guess : starts) {
    const auto nr = detail::run_heuristic_newton(alpha, mu, guess);
    if (nr.converged && nr.residual.lpNorm<Eigen::Infinity>() <= kHeuristicTolerance) {
      return detail::finish_solution(alpha, mu, nr);
    }
    last = nr.residual.lpNorm<Eigen::Infinity>();
  }
  throw NumericalError("heuristic system did not converge for alpha = " + std::to_string(alpha) +
                       ", mu = " + std::to_string(mu) + " (last residual " + std::to_string(last) + ")");
}

/// Distinct roots reached from the default and fallback starts.
inline std::vector<HeuristicSolution> heuristic_roots(double alpha, double mu, double distinct_tol = 1e-8) {
  detail::require_admissible(alpha, mu);
  std::vector<HeuristicSolution> roots;
  for (const auto& guess : {kDefaultGuess, kFallbackGuess}) {
    const auto nr = detail::run_heuristic_newton(alpha, mu, guess);
    if (!nr.converged) continue;
    const auto sol = detail::finish_solution(alpha, mu, nr);
    bool seen = false;
    for (const auto& r : roots) {
      seen = seen || (std::abs(r.p_star - sol.p_star) <= distinct_tol && std::abs(r.m_star - sol.m_star) <= distinct_tol &&
                      std::abs(r.sigma_star - sol.sigma_star) <= distinct_tol);
    }
    if (!seen) roots.push_back(sol);
  }
  return roots;
}

struct CenteredSolution {
  double p_star = 0.0;
  double sigma_star = 0.0;
  double delta_star = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Two-unknown system for mu = 0, with delta = alpha / (sigma sqrt p).
inline CenteredSolution solve_centered_system(double alpha) {
  if (!(alpha > std::numbers::sqrt2)) throw DomainError("solve_centered_system: alpha must exceed sqrt(2)");
  auto residual = [alpha](const Eigen::Vector2d& v) -> Eigen::Vector2d {
    const double delta = v(0), sigma = v(1);
    const auto tm = truncated_moments(delta);
    const double s = sigma * std::sqrt(tm.tail_prob) / alpha;
    return {alpha - sigma * std::sqrt(tm.tail_prob) * delta, 1.0 + 2.0 * s * tm.mean + s * s * tm.second - sigma * sigma};
  };
  auto project = [](Eigen::Vector2d v) {
    v(0) = std::max(v(0), detail::kMinDelta);
    v(1) = std::max(v(1), detail::kMinPositive);
    return v;
  };
  for (const auto& guess : {kDefaultGuess, kFallbackGuess}) {
    const auto nr = damped_newton<2>(residual, Eigen::Vector2d{std_normal_quantile(guess.p), guess.sigma}, project);
    if (!nr.converged) continue;
    CenteredSolution sol;
    sol.p_star = std_normal_cdf(nr.x(0));
    sol.sigma_star = nr.x(1);
    sol.delta_star = alpha / (sol.sigma_star * std::sqrt(sol.p_star));
    sol.residual_norm = nr.residual.lpNorm<Eigen::Infinity>();
    sol.iterations = nr.iterations;
    return sol;
  }
  throw NumericalError("centered heuristic system did not converge for alpha = " + std::to_string(alpha));
}

/// Slope alpha / (sigma* sqrt p*) of the map from Z to abundance, inverted.
inline double density_scale(const HeuristicSolution& sol) {
  return sol.alpha / (sol.sigma_star * std::sqrt(sol.p_star));
}

/// Limiting density of a surviving abundance: the law of
/// 1 + mu p* m* + (sigma* sqrt p* / alpha) Z conditioned on Z > -delta*.
inline double survivor_density(double y, const HeuristicSolution& sol) {
  if (y <= 0.0) return 0.0;
  const double c = density_scale(sol);
  return c / std_normal_cdf(sol.delta_star) * std_normal_pdf(c * y - sol.delta_star);
}

inline double survivor_cdf(double y, const HeuristicSolution& sol) {
  if (y <= 0.0) return 0.0;
  const double c = density_scale(sol);
  return (std_normal_cdf(c * y - sol.delta_star) - std_normal_cdf(-sol.delta_star)) / std_normal_cdf(sol.delta_star);
}

/// Second-order estimate of the Hill number of order 1 at equilibrium.
inline double hill_approximation(int n, const HeuristicSolution& sol) {
  const double ratio = sol.sigma_star * sol.sigma_star / (sol.m_star * sol.m_star);
  return n * sol.p_star * (1.5 - 0.5 * ratio);
}

}  // namespace randlv
