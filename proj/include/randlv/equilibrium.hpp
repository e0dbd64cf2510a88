#pragma once

// LV equilibrium x* as the solution of LCP(I - B, -1), and the empirical
// statistics of its surviving species.

#include <cmath>
#include <vector>

#include "randlv/error.hpp"
#include "randlv/lcp.hpp"
#include "randlv/random_ensembles.hpp"

namespace randlv {

/// Abundances at or below this are extinct.
inline constexpr double kSurvivalThreshold = 1e-8;

struct Equilibrium {
  Vector x_star;
  EnsembleParams source;
  LcpStatus solver_status = LcpStatus::solved;
  int pivots = 0;
  bool admissible = true;  // false: uniqueness and stability not guaranteed

  bool solved() const { return solver_status == LcpStatus::solved; }
};

inline LcpProblem equilibrium_lcp(const Matrix& b) {
  const Eigen::Index n = b.rows();
  return {Matrix::Identity(n, n) - b, Vector::Constant(n, -1.0)};
}

/// Solve for x* given B. Non-admissible parameters are accepted and flagged;
/// solver failures are reported through solver_status.
inline Equilibrium compute_equilibrium(const Matrix& b, const EnsembleParams& source,
                                       const LemkeOptions& opts = {}) {
  const auto lcp = lemke_solve(equilibrium_lcp(b), opts);
  Equilibrium eq;
  eq.source = source;
  eq.solver_status = lcp.status;
  eq.pivots = lcp.pivots;
  eq.admissible = is_admissible(source.alpha, source.mu);
  if (lcp.solved()) {
    eq.x_star = lcp.z;
    for (auto& x : eq.x_star) {
      if (x <= kSurvivalThreshold) x = 0.0;
    }
  }
  return eq;
}

inline Equilibrium compute_equilibrium(const InteractionMatrix& b, const LemkeOptions& opts = {}) {
  return compute_equilibrium(b.entries, b.params, opts);
}

struct EquilibriumResiduals {
  double complementarity = 0.0;  // max_k |x_k (1 - x_k + (Bx)_k)|
  double invasion = 0.0;         // max_k (1 - x_k + (Bx)_k), should be <= 0
};

inline EquilibriumResiduals equilibrium_residuals(const Matrix& b, const Vector& x) {
  const Vector growth = Vector::Ones(x.size()) - x + b * x;
  return {(x.array() * growth.array()).abs().maxCoeff(), growth.maxCoeff()};
}

struct SurvivorStats {
  double p_hat = 0.0;
  double m_hat = 0.0;
  double sigma_hat = 0.0;  // root of the second moment over S, not a standard deviation
  std::vector<int> survivors;
};

inline SurvivorStats survivor_stats(const Vector& x_star) {
  SurvivorStats st;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < x_star.size(); ++i) {
    if (x_star(i) > kSurvivalThreshold) {
      st.survivors.push_back(static_cast<int>(i));
      sum += x_star(i);
      sum_sq += x_star(i) * x_star(i);
    }
  }
  if (st.survivors.empty()) throw DomainError("survivor_stats: no surviving species");
  const auto count = static_cast<double>(st.survivors.size());
  st.p_hat = count / static_cast<double>(x_star.size());
  st.m_hat = sum / count;
  st.sigma_hat = std::sqrt(sum_sq / count);
  return st;
}

inline SurvivorStats survivor_stats(const Equilibrium& eq) {
  if (!eq.solved()) throw DomainError("survivor_stats: equilibrium solver status is " + to_string(eq.solver_status));
  return survivor_stats(eq.x_star);
}

}  // namespace randlv
