#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ccurv::ode {

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;
};

/// Right-hand side dy/dt = f(t, y). Implementations write into `dydt`.
using VectorField =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IntegratorOptions {
  Tolerance tol{};
  double max_step = 0.0;  ///< 0 means unbounded
  std::size_t max_steps = 500000;
  /// Optional early stop, checked after every accepted step.
  std::function<bool(double t, std::span<const double> y)> stop;
};

/// Accepted-step record of an adaptive integration on [0, t_end].
///
/// Between nodes the trajectory is a cubic Hermite interpolant built from the
/// stored states and derivatives. `refine()` re-integrates from the nearest
/// node to the requested time, which is exact to the integration tolerance; it
/// uses a copy of the vector field, so anything the field captured by
/// reference must outlive the trajectory.
class Trajectory {
 public:
  Trajectory() = default;

  std::size_t size() const noexcept { return times_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> times() const noexcept { return times_; }
  double t_end() const noexcept { return times_.empty() ? 0.0 : times_.back(); }

  std::span<const double> state(std::size_t node) const;
  std::span<const double> derivative(std::size_t node) const;
  double value(std::size_t node, std::size_t component) const {
    return states_[node * dim_ + component];
  }
  std::span<const double> final_state() const { return state(size() - 1); }

  /// Hermite dense output of one component.
  double interpolate(double t, std::size_t component) const;
  std::vector<double> interpolate(double t) const;

  /// Re-integrates from the closest node at or before `t`.
  std::vector<double> refine(double t) const;

  const Tolerance& tolerance() const noexcept { return tol_; }
  /// Largest normalized local error estimate among accepted steps (<= 1).
  double max_error_ratio() const noexcept { return max_error_ratio_; }
  std::size_t rejected_steps() const noexcept { return rejected_; }

 private:
  friend Trajectory integrate_ivp(const VectorField&, std::span<const double>, double,
                                  const IntegratorOptions&);
  std::size_t locate(double t) const;

  std::size_t dim_ = 0;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<double> derivs_;
  Tolerance tol_;
  double max_error_ratio_ = 0.0;
  std::size_t rejected_ = 0;
  VectorField system_;
};

/// Adaptive Dormand–Prince 5(4) integration of y' = f(t, y) from t = 0.
///
/// Throws NumericalError on step-size underflow, on a non-finite state and when
/// `max_steps` is exhausted; ConfigError for invalid tolerances.
Trajectory integrate_ivp(const VectorField& f, std::span<const double> y0, double t_end,
                         const IntegratorOptions& opts = {});

/// Fixed-step Dormand–Prince fifth-order solution at t_end (no error control).
/// Its result depends smoothly on y0 and on parameters of f, unlike the
/// adaptive solver whose step sequence jumps.
std::vector<double> integrate_fixed(const VectorField& f, std::span<const double> y0, double t_end,
                                    int steps);

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of f on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12);

/// u'' + omega^2 u = forcing, u(0) = u'(0) = 0.
struct ForcedOscillatorSpec {
  double omega = 1.0;
  std::function<double(double)> forcing;
};

/// Value at t of the zero-data solution of the forced oscillator, computed from
/// the Duhamel representation by adaptive quadrature.
double solution_map(const ForcedOscillatorSpec& spec, double t, double abs_tol = 1e-12);

struct ZeroOptions {
  double t_exclude = 1e-6;
  double zero_tol = 1e-12;
};

/// First sign change of one trajectory component after `t_exclude`, polished
/// by bisection; nullopt when the component keeps its sign.
std::optional<double> first_zero(const Trajectory& traj, std::size_t component,
                                 const ZeroOptions& opts = {});

}  // namespace ccurv::ode
