#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace randlv {

struct NewtonOptions {
  double tol = 1e-12;         // on the max-norm of the residual
  int max_iter = 200;
  double fd_step = 1e-7;      // relative forward-difference step
  double min_damping = 1e-10;
};

template <int N>
struct NewtonResult {
  Eigen::Matrix<double, N, 1> x;
  Eigen::Matrix<double, N, 1> residual;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton with a forward-difference Jacobian and step halving on the
/// residual norm. `project` maps a trial point back into the domain.
template <int N, class Residual, class Project>
NewtonResult<N> damped_newton(Residual&& f, Eigen::Matrix<double, N, 1> x, Project&& project,
                              const NewtonOptions& opts = {}) {
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;

  NewtonResult<N> out;
  x = project(x);
  Vec r = f(x);
  double norm = r.template lpNorm<Eigen::Infinity>();

  for (int it = 0; it < opts.max_iter; ++it) {
    out.iterations = it;
    if (norm <= opts.tol) {
      out.converged = true;
      break;
    }
    Mat jac;
    for (int j = 0; j < N; ++j) {
      Vec xh = x;
      const double h = opts.fd_step * std::max(1.0, std::abs(x(j)));
      xh(j) += h;
      jac.col(j) = (f(xh) - r) / h;
    }
    const Vec step = jac.fullPivLu().solve(-r);
    if (!step.allFinite()) break;

    double t = 1.0;
    bool improved = false;
    while (t >= opts.min_damping) {
      const Vec trial = project(Vec(x + t * step));
      const Vec rt = f(trial);
      const double nt = rt.template lpNorm<Eigen::Infinity>();
      if (std::isfinite(nt) && nt < norm) {
        x = trial;
        r = rt;
        norm = nt;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;
    out.iterations = it + 1;
  }
  out.converged = out.converged || norm <= opts.tol;
  out.x = x;
  out.residual = r;
  return out;
}

}  // namespace randlv
