#pragma once

// Random interaction matrices B = A / (alpha sqrt(n)) + (mu / n) 11^T and the
// spectral quantities that decide whether the LV equilibrium is unique.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "randlv/error.hpp"
#include "randlv/rng.hpp"

namespace randlv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Law of the standardized entries A_kl (mean 0, variance 1).
enum class EntryDist {
  gaussian,  // N(0, 1)
  uniform,   // U(-sqrt 3, sqrt 3)
  zero,      // A == 0, test-only
};

inline EntryDist parse_entry_dist(std::string_view tag) {
  if (tag == "gaussian" || tag == "standard-gaussian") return EntryDist::gaussian;
  if (tag == "uniform" || tag == "uniform-sym-sqrt3") return EntryDist::uniform;
  if (tag == "zero") return EntryDist::zero;
  throw ConfigError("unknown entry distribution '" + std::string(tag) +
                    "' (expected gaussian, uniform or zero)");
}

inline std::string to_string(EntryDist dist) {
  switch (dist) {
    case EntryDist::gaussian: return "gaussian";
    case EntryDist::uniform: return "uniform";
    case EntryDist::zero: return "zero";
  }
  return "unknown";
}

struct EnsembleParams {
  int n = 0;
  double alpha = 1.0;
  double mu = 0.0;
  EntryDist dist = EntryDist::gaussian;
  std::uint64_t seed = 0;
};

/// A realization of B together with the parameters that generated it.
struct InteractionMatrix {
  EnsembleParams params;
  Matrix entries;

  int n() const { return params.n; }
};

inline void check_ensemble_params(int n, double alpha) {
  if (n < 1) throw DomainError("matrix size n must be >= 1");
  if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
}

/// Standardized matrix A. Entries are drawn row by row (k outer, l inner),
/// diagonal included, from the stream seeded by `seed`.
inline Matrix sample_standardized(int n, EntryDist dist, std::uint64_t seed) {
  if (n < 1) throw DomainError("matrix size n must be >= 1");
  Matrix a = Matrix::Zero(n, n);
  if (dist == EntryDist::zero) return a;
  Rng rng(seed);
  const double half_width = std::sqrt(3.0);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      a(k, l) = dist == EntryDist::gaussian ? rng.normal() : rng.uniform(-half_width, half_width);
    }
  }
  return a;
}

/// B from a standardized realization A.
inline Matrix scale_interactions(const Matrix& a, double alpha, double mu) {
  const auto n = static_cast<double>(a.rows());
  return (a / (alpha * std::sqrt(n))).array() + mu / n;
}

inline InteractionMatrix sample_interaction_matrix(int n, double alpha, double mu, EntryDist dist,
                                                   std::uint64_t seed) {
  check_ensemble_params(n, alpha);
  InteractionMatrix b;
  b.params = {n, alpha, mu, dist, seed};
  b.entries = scale_interactions(sample_standardized(n, dist, seed), alpha, mu);
  return b;
}

/// mu threshold above which the rank-one drift pushes an outlier out of the
/// semicircle bulk of B + B^T.
inline double outlier_threshold(double alpha) { return 1.0 / (std::numbers::sqrt2 * alpha); }

/// Asymptotic top eigenvalue of B + B^T.
inline double predicted_top_eigenvalue(double alpha, double mu) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
  if (mu > outlier_threshold(alpha)) return 2.0 * mu + 1.0 / (alpha * alpha * mu);
  return 2.0 * std::numbers::sqrt2 / alpha;
}

/// Upper bound on mu for the admissible region at a given alpha (alpha > sqrt 2).
inline double admissible_mu_bound(double alpha) {
  return 0.5 + 0.5 * std::sqrt(1.0 - 2.0 / (alpha * alpha));
}

/// (alpha, mu) in the region where a unique globally stable equilibrium is
/// guaranteed: alpha > sqrt 2 and mu < 1/2 + 1/2 sqrt(1 - 2/alpha^2).
inline bool is_admissible(double alpha, double mu) {
  if (!(alpha > std::numbers::sqrt2)) return false;
  return mu < admissible_mu_bound(alpha);
}

/// B + B^T. Each entry is a single IEEE addition, so the result is exactly symmetric.
inline Matrix symmetrize(const Matrix& b) { return b + b.transpose(); }

struct LanczosResult {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Largest eigenvalue of a symmetric matrix by Lanczos with full
/// reorthogonalization. Stops when the Ritz residual |beta_j s_j| drops
/// below rel_tol times the spectral scale seen so far.
inline LanczosResult lanczos_top_eigenvalue(const Matrix& s, double rel_tol = 1e-8, int max_iter = 400) {
  const Eigen::Index n = s.rows();
  if (n == 0 || s.cols() != n) throw DomainError("lanczos: matrix must be square and non-empty");
  const Eigen::Index kmax = std::min<Eigen::Index>(n, max_iter);

  Matrix basis(n, kmax);
  Vector start(n);
  Rng rng(0x1A2C705ULL);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = rng.normal();
  basis.col(0) = start.normalized();

  std::vector<double> diag;
  std::vector<double> offdiag;
  double beta_prev = 0.0;
  LanczosResult out;

  for (Eigen::Index j = 0; j < kmax; ++j) {
    Vector w = s * basis.col(j);
    const double a = basis.col(j).dot(w);
    w -= a * basis.col(j);
    if (j > 0) w -= beta_prev * basis.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const auto v = basis.leftCols(j + 1);
      w -= v * (v.transpose() * w);
    }
    const double beta = w.norm();
    diag.push_back(a);

    const auto m = static_cast<Eigen::Index>(diag.size());
    Eigen::SelfAdjointEigenSolver<Matrix> tri;
    Vector d = Eigen::Map<Vector>(diag.data(), m);
    Vector e = m > 1 ? Vector(Eigen::Map<Vector>(offdiag.data(), m - 1)) : Vector(0);
    tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (tri.info() != Eigen::Success) throw NumericalError("lanczos: tridiagonal eigensolver failed");
    const Vector& ritz = tri.eigenvalues();
    const double theta = ritz(m - 1);
    const double scale = std::max({std::abs(ritz(0)), std::abs(theta), 1e-300});
    const double residual = std::abs(beta * tri.eigenvectors()(m - 1, m - 1));

    out = {theta, residual, static_cast<int>(m)};
    const bool exhausted = beta <= 1e-14 * std::max(scale, 1.0) || m == n;
    if (residual <= rel_tol * scale || exhausted || (scale == 1e-300 && residual == 0.0)) return out;
    if (j + 1 >= kmax) break;
    offdiag.push_back(beta);
    basis.col(j + 1) = w / beta;
    beta_prev = beta;
  }
  throw NumericalError("lanczos: no convergence after " + std::to_string(out.iterations) +
                       " iterations (residual " + std::to_string(out.residual) + ")");
}

struct SpectralReport {
  double lambda_max_sym = 0.0;
  double predicted_lambda_max = 0.0;
  bool outlier_regime = false;
  int iterations = 0;
  std::optional<double> spectral_radius;
};

/// Top eigenvalue of B + B^T next to its asymptotic prediction.
inline SpectralReport symmetrized_top_eigenvalue(const InteractionMatrix& b) {
  const auto top = lanczos_top_eigenvalue(symmetrize(b.entries));
  SpectralReport report;
  report.lambda_max_sym = top.value;
  report.iterations = top.iterations;
  report.predicted_lambda_max = predicted_top_eigenvalue(b.params.alpha, b.params.mu);
  report.outlier_regime = b.params.mu > outlier_threshold(b.params.alpha);
  return report;
}

/// All eigenvalues of B + B^T in ascending order (dense solver).
inline Vector symmetric_eigenvalues(const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(b), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  return solver.eigenvalues();
}

/// Eigenvalues of the nonsymmetric B. Diagnostic only.
inline Eigen::VectorXcd nonsymmetric_eigenvalues(const Matrix& b) {
  Eigen::EigenSolver<Matrix> solver(b, false);
  if (solver.info() != Eigen::Success) throw NumericalError("nonsymmetric eigensolver failed");
  return solver.eigenvalues();
}

inline double spectral_radius(const Matrix& b) {
  return nonsymmetric_eigenvalues(b).cwiseAbs().maxCoeff();
}

}  // namespace randlv
