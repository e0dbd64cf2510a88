#pragma once

// Linear complementarity: find z, w >= 0 with w = M z + q and z^T w = 0.
// Lemke's complementary pivoting plus an exhaustive oracle for small n.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "randlv/error.hpp"

namespace randlv {

struct LcpProblem {
  Eigen::MatrixXd M;
  Eigen::VectorXd q;

  Eigen::Index size() const { return q.size(); }

  void validate() const {
    if (M.rows() != M.cols()) throw ConfigError("LCP matrix must be square");
    if (M.rows() != q.size()) throw ConfigError("LCP matrix and vector dimensions disagree");
  }
};

enum class LcpStatus { solved, ray_termination, max_pivots };

inline std::string to_string(LcpStatus status) {
  switch (status) {
    case LcpStatus::solved: return "solved";
    case LcpStatus::ray_termination: return "ray-termination";
    case LcpStatus::max_pivots: return "max-pivots";
  }
  return "unknown";
}

struct LcpSolution {
  Eigen::VectorXd z;
  Eigen::VectorXd w;
  std::vector<int> support;  // {i : z_i > 0}
  int pivots = 0;
  LcpStatus status = LcpStatus::solved;

  bool solved() const { return status == LcpStatus::solved; }
};

struct LemkeOptions {
  int max_pivots = 0;        // 0 selects 50 n
  double pivot_tol = 1e-10;  // entries at or below this are not eligible pivots
  double zero_clamp = 1e-12;
};

namespace detail {

inline void clamp_small(Eigen::VectorXd& v, double clamp) {
  for (auto& x : v) {
    if (std::abs(x) < clamp) x = 0.0;
  }
}

inline std::vector<int> positive_support(const Eigen::VectorXd& z) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) > 0.0) s.push_back(static_cast<int>(i));
  }
  return s;
}

// Dense Lemke tableau stored column-major. Columns 0..n-1 are w, n..2n-1 are
// z, 2n is the artificial z0. The w block holds the current basis inverse,
// which drives the lexicographic ratio test.
class LemkeTableau {
 public:
  explicit LemkeTableau(const LcpProblem& prob)
      : n_(prob.size()), cols_(2 * n_ + 1), t_(static_cast<std::size_t>(cols_ * n_), 0.0),
        rhs_(prob.q.data(), prob.q.data() + n_), basis_(n_), is_basic_(cols_, false) {
    for (Eigen::Index i = 0; i < n_; ++i) {
      at(i, i) = 1.0;
      basis_[i] = i;
      is_basic_[i] = true;
      at(i, 2 * n_) = -1.0;
      for (Eigen::Index j = 0; j < n_; ++j) at(i, n_ + j) = -prob.M(i, j);
    }
  }

  Eigen::Index n() const { return n_; }
  Eigen::Index artificial() const { return 2 * n_; }
  Eigen::Index complement(Eigen::Index var) const { return var < n_ ? var + n_ : var - n_; }
  Eigen::Index basic_in_row(Eigen::Index row) const { return basis_[row]; }

  double& at(Eigen::Index row, Eigen::Index col) { return t_[static_cast<std::size_t>(col * n_ + row)]; }
  double at(Eigen::Index row, Eigen::Index col) const { return t_[static_cast<std::size_t>(col * n_ + row)]; }
  double rhs(Eigen::Index row) const { return rhs_[row]; }

  // Compare rows a and b lexicographically on (rhs, B^-1 row) / scale.
  // Returns true when row a is strictly smaller.
  bool lex_less(Eigen::Index a, double scale_a, Eigen::Index b, double scale_b) const {
    const double ra = rhs_[a] / scale_a;
    const double rb = rhs_[b] / scale_b;
    if (!nearly_equal(ra, rb)) return ra < rb;
    for (Eigen::Index k = 0; k < n_; ++k) {
      const double xa = at(a, k) / scale_a;
      const double xb = at(b, k) / scale_b;
      if (!nearly_equal(xa, xb)) return xa < xb;
    }
    return false;
  }

  void pivot(Eigen::Index row, Eigen::Index entering) {
    const double* col_in = &t_[static_cast<std::size_t>(entering * n_)];
    std::vector<double> d(col_in, col_in + n_);
    const double piv = d[row];
    const Eigen::Index leaving = basis_[row];

    auto eliminate = [&](double* col) {
      const double pivot_entry = col[row] / piv;
      if (pivot_entry == 0.0) return;
      for (Eigen::Index i = 0; i < n_; ++i) col[i] -= d[i] * pivot_entry;
      col[row] = pivot_entry;
    };

    is_basic_[leaving] = false;
    for (Eigen::Index j = 0; j < cols_; ++j) {
      if (is_basic_[j] || j == entering) continue;
      eliminate(&t_[static_cast<std::size_t>(j * n_)]);
    }
    eliminate(rhs_.data());

    double* col_new = &t_[static_cast<std::size_t>(entering * n_)];
    std::fill(col_new, col_new + n_, 0.0);
    col_new[row] = 1.0;
    basis_[row] = entering;
    is_basic_[entering] = true;
  }

  Eigen::VectorXd values_of(Eigen::Index first_var) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Eigen::Index var = basis_[i];
      if (var >= first_var && var < first_var + n_) v(var - first_var) = rhs_[i];
    }
    return v;
  }

 private:
  static bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  }

  Eigen::Index n_;
  Eigen::Index cols_;
  std::vector<double> t_;
  std::vector<double> rhs_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> is_basic_;
};

}  // namespace detail

/// Lemke's algorithm with covering vector 1 and lexicographic ratio test.
inline LcpSolution lemke_solve(const LcpProblem& prob, const LemkeOptions& opts = {}) {
  prob.validate();
  const Eigen::Index n = prob.size();
  const int budget = opts.max_pivots > 0 ? opts.max_pivots : static_cast<int>(50 * std::max<Eigen::Index>(n, 1));

  LcpSolution sol;
  sol.z = Eigen::VectorXd::Zero(n);
  sol.w = prob.q;
  if (n == 0 || prob.q.minCoeff() >= 0.0) {
    detail::clamp_small(sol.w, opts.zero_clamp);
    return sol;
  }

  detail::LemkeTableau tab(prob);

  // z0 enters; the leaving row is the lexicographic minimum of (q_i, e_i).
  Eigen::Index row = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (tab.lex_less(i, 1.0, row, 1.0)) row = i;
  }
  Eigen::Index entering = tab.artificial();

  while (true) {
    if (sol.pivots >= budget) {
      sol.status = LcpStatus::max_pivots;
      return sol;
    }
    const Eigen::Index leaving = tab.basic_in_row(row);
    tab.pivot(row, entering);
    ++sol.pivots;
    if (leaving == tab.artificial()) break;

    entering = tab.complement(leaving);
    Eigen::Index best = -1;
    bool artificial_ties = false;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = tab.at(i, entering);
      if (d <= opts.pivot_tol) continue;
      const double ratio = tab.rhs(i) / d;
      if (best < 0 || tab.lex_less(i, d, best, tab.at(best, entering))) {
        best = i;
        best_ratio = ratio;
      }
    }
    if (best < 0) {
      sol.status = LcpStatus::ray_termination;
      return sol;
    }
    // Let z0 leave whenever it ties on the ratio: that ends the pivoting.
    for (Eigen::Index i = 0; i < n && !artificial_ties; ++i) {
      if (tab.basic_in_row(i) != tab.artificial()) continue;
      const double d = tab.at(i, entering);
      if (d > opts.pivot_tol &&
          std::abs(tab.rhs(i) / d - best_ratio) <= 1e-12 * std::max(1.0, std::abs(best_ratio))) {
        best = i;
        artificial_ties = true;
      }
    }
    row = best;
  }

  sol.z = tab.values_of(n);
  sol.w = tab.values_of(0);
  detail::clamp_small(sol.z, opts.zero_clamp);
  detail::clamp_small(sol.w, opts.zero_clamp);
  sol.support = detail::positive_support(sol.z);
  return sol;
}

/// True iff z, w are nonnegative, w = M z + q and min(z_i, w_i) <= tol.
inline bool verify_solution(const LcpProblem& prob, const LcpSolution& sol, double tol) {
  const Eigen::Index n = prob.size();
  if (sol.z.size() != n || sol.w.size() != n) return false;
  if ((sol.z.array() < -tol).any() || (sol.w.array() < -tol).any()) return false;
  const double scale = 1.0 + prob.q.lpNorm<Eigen::Infinity>() +
                       prob.M.cwiseAbs().rowwise().sum().maxCoeff() * sol.z.lpNorm<Eigen::Infinity>();
  const Eigen::VectorXd affine = prob.M * sol.z + prob.q - sol.w;
  if (n > 0 && affine.lpNorm<Eigen::Infinity>() > tol * scale) return false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::min(sol.z(i), sol.w(i)) > tol) return false;
  }
  return true;
}

inline constexpr int kMaxEnumerationSize = 20;

struct BruteForceResult {
  std::vector<LcpSolution> solutions;
  std::vector<std::uint32_t> singular_supports;  // bitmasks of skipped supports
};

namespace detail {

inline Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = m(idx[a], idx[b]);
  }
  return sub;
}

inline std::vector<int> mask_indices(std::uint32_t mask, int n) {
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) idx.push_back(i);
  }
  return idx;
}

inline void guard_enumeration(Eigen::Index n, const char* what) {
  if (n > kMaxEnumerationSize) {
    throw DomainError(std::string(what) + ": n = " + std::to_string(n) + " exceeds enumeration limit " +
                      std::to_string(kMaxEnumerationSize));
  }
}

}  // namespace detail

/// Enumerate all 2^n supports, solve M_II z_I = -q_I on each and keep the
/// sign-feasible candidates. Distinct solutions only.
inline BruteForceResult brute_force_solve(const LcpProblem& prob, double tol = 1e-9) {
  prob.validate();
  const auto n = static_cast<int>(prob.size());
  detail::guard_enumeration(n, "brute_force_solve");

  BruteForceResult result;
  const std::uint32_t count = 1u << n;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    const auto idx = detail::mask_indices(mask, n);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    if (!idx.empty()) {
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(detail::principal_submatrix(prob.M, idx));
      if (!(lu.rcond() > 1e-14)) {
        result.singular_supports.push_back(mask);
        continue;
      }
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t a = 0; a < idx.size(); ++a) rhs(a) = -prob.q(idx[a]);
      const Eigen::VectorXd z_sub = lu.solve(rhs);
      for (std::size_t a = 0; a < idx.size(); ++a) z(idx[a]) = z_sub(a);
    }
    if ((z.array() < -tol).any()) continue;
    Eigen::VectorXd w = prob.M * z + prob.q;
    for (int i : idx) w(i) = 0.0;
    if ((w.array() < -tol).any()) continue;

    LcpSolution cand;
    cand.z = z;
    cand.w = w;
    detail::clamp_small(cand.z, 1e-12);
    detail::clamp_small(cand.w, 1e-12);
    const bool duplicate = std::any_of(result.solutions.begin(), result.solutions.end(), [&](const LcpSolution& s) {
      return (s.z - cand.z).lpNorm<Eigen::Infinity>() <= tol;
    });
    if (duplicate) continue;
    cand.support = detail::positive_support(cand.z);
    result.solutions.push_back(std::move(cand));
  }
  return result;
}

/// Every principal minor strictly positive (> minor_tol).
inline bool is_p_matrix(const Eigen::MatrixXd& m, double minor_tol = 1e-12) {
  if (m.rows() != m.cols()) throw ConfigError("is_p_matrix: matrix must be square");
  const auto n = static_cast<int>(m.rows());
  detail::guard_enumeration(n, "is_p_matrix");
  for (int i = 0; i < n; ++i) {
    if (!(m(i, i) > minor_tol)) return false;
  }
  const std::uint32_t count = 1u << n;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;  // singletons done above
    const auto idx = detail::mask_indices(mask, n);
    if (!(Eigen::PartialPivLU<Eigen::MatrixXd>(detail::principal_submatrix(m, idx)).determinant() > minor_tol)) {
      return false;
    }
  }
  return true;
}

}  // namespace randlv
