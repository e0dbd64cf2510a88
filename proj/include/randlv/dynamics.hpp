#pragma once

// Fixed-step RK4 integration of dx_k/dt = x_k (1 - x_k + (B_t x)_k), with the
// interaction strength either constant or switching once at t0.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "randlv/error.hpp"
#include "randlv/random_ensembles.hpp"

namespace randlv {

enum class ScheduleKind { constant, step };

/// alpha(t) = alpha1 for t < t0 and alpha2 afterwards. The standardized
/// realization A is shared by both regimes.
class InteractionSchedule {
 public:
  static InteractionSchedule constant(std::shared_ptr<const Matrix> base, double alpha, double mu) {
    return InteractionSchedule(ScheduleKind::constant, std::move(base), alpha, alpha, 0.0, mu);
  }

  static InteractionSchedule step(std::shared_ptr<const Matrix> base, double alpha1, double alpha2, double t0,
                                  double mu) {
    if (!(t0 >= 0.0)) throw DomainError("step schedule: t0 must be >= 0");
    return InteractionSchedule(ScheduleKind::step, std::move(base), alpha1, alpha2, t0, mu);
  }

  ScheduleKind kind() const { return kind_; }
  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  double t0() const { return t0_; }
  double mu() const { return mu_; }
  int n() const { return static_cast<int>(base_->rows()); }
  const Matrix& base() const { return *base_; }

  double alpha_at(double t) const { return kind_ == ScheduleKind::step && t >= t0_ ? alpha2_ : alpha1_; }

 private:
  InteractionSchedule(ScheduleKind kind, std::shared_ptr<const Matrix> base, double alpha1, double alpha2, double t0,
                      double mu)
      : kind_(kind), base_(std::move(base)), alpha1_(alpha1), alpha2_(alpha2), t0_(t0), mu_(mu) {
    if (!base_ || base_->rows() == 0 || base_->rows() != base_->cols()) {
      throw DomainError("schedule needs a non-empty square base matrix");
    }
    for (double a : {alpha1_, alpha2_}) {
      if (!is_admissible(a, mu_)) {
        throw DomainError("schedule leaves the admissible region at (alpha, mu) = (" + std::to_string(a) + ", " +
                          std::to_string(mu_) + ")");
      }
    }
  }

  ScheduleKind kind_;
  std::shared_ptr<const Matrix> base_;
  double alpha1_;
  double alpha2_;
  double t0_;
  double mu_;
};

struct Trajectory {
  std::vector<double> times;
  Matrix states;  // one row per recorded time
  double dt = 0.0;
  std::string scheme = "rk4";

  Eigen::Index size() const { return static_cast<Eigen::Index>(times.size()); }
  Vector state(Eigen::Index i) const { return states.row(i).transpose(); }
  Vector final_state() const { return state(size() - 1); }
};

struct IntegrationOptions {
  int stride = 10;  // record every `stride` steps (the final step is always recorded)
};

inline Vector lv_rhs(const Matrix& b, const Vector& x) {
  return (x.array() * (1.0 - x.array() + (b * x).array())).matrix();
}

/// Integrate from x0 > 0 up to t_end with step dt <= 0.1. t0 is snapped to the
/// nearest multiple of dt so no RK4 step straddles the switch.
inline Trajectory integrate_lv(const InteractionSchedule& schedule, const Vector& x0, double t_end, double dt,
                               const IntegrationOptions& opts = {}) {
  if (x0.size() != schedule.n()) throw DomainError("integrate_lv: x0 has the wrong dimension");
  if (!(x0.array() > 0.0).all()) throw DomainError("integrate_lv: x0 must be positive");
  if (!(dt > 0.0 && dt <= 0.1)) throw DomainError("integrate_lv: dt must lie in (0, 0.1]");
  if (!(t_end > 0.0)) throw DomainError("integrate_lv: t_end must be > 0");
  if (opts.stride < 1) throw DomainError("integrate_lv: stride must be >= 1");

  const Matrix b1 = scale_interactions(schedule.base(), schedule.alpha1(), schedule.mu());
  const Matrix b2 = schedule.kind() == ScheduleKind::step
                        ? scale_interactions(schedule.base(), schedule.alpha2(), schedule.mu())
                        : Matrix();
  const auto steps = static_cast<std::int64_t>(std::llround(t_end / dt));
  const auto switch_step = schedule.kind() == ScheduleKind::step ? static_cast<std::int64_t>(std::llround(schedule.t0() / dt))
                                                                  : steps + 1;

  const std::int64_t records = steps / opts.stride + 1 + (steps % opts.stride != 0 ? 1 : 0);
  Trajectory traj;
  traj.dt = dt;
  traj.times.reserve(static_cast<std::size_t>(records));
  traj.states.resize(records, x0.size());

  Eigen::Index row = 0;
  auto record = [&](std::int64_t k, const Vector& x) {
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.row(row++) = x.transpose();
  };

  Vector x = x0;
  record(0, x);
  for (std::int64_t k = 0; k < steps; ++k) {
    const Matrix& b = k < switch_step ? b1 : b2;
    const Vector k1 = lv_rhs(b, x);
    const Vector k2 = lv_rhs(b, x + 0.5 * dt * k1);
    const Vector k3 = lv_rhs(b, x + 0.5 * dt * k2);
    const Vector k4 = lv_rhs(b, x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (!(x(i) > 0.0) || !std::isfinite(x(i))) {
        throw NumericalError("integrate_lv: component " + std::to_string(i) + " became non-positive at t = " +
                             std::to_string(static_cast<double>(k + 1) * dt) + "; try a smaller dt");
      }
    }
    if ((k + 1) % opts.stride == 0 || k + 1 == steps) record(k + 1, x);
  }
  return traj;
}

/// Earliest recorded time after which the trajectory stays within tol of target (sup norm).
inline std::optional<double> detect_convergence(const Trajectory& traj, const Vector& target, double tol) {
  if (traj.states.cols() != target.size()) throw DomainError("detect_convergence: dimension mismatch");
  std::optional<double> since;
  for (Eigen::Index i = traj.size() - 1; i >= 0; --i) {
    if ((traj.states.row(i).transpose() - target).lpNorm<Eigen::Infinity>() > tol) break;
    since = traj.times[static_cast<std::size_t>(i)];
  }
  return since;
}

}  // namespace randlv
