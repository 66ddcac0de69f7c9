#include "ccurv/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "ccurv/error.hpp"

namespace ccurv::ode {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// fifth-order solution minus embedded fourth-order one
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

double rms_norm(std::span<const double> v, std::span<const double> y, const Tolerance& tol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sc = tol.abs + tol.rel * std::abs(y[i]);
    acc += (v[i] / sc) * (v[i] / sc);
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Starting step after Hairer, Nørsett & Wanner (II.4).
double initial_step(const VectorField& f, std::span<const double> y0, std::span<const double> f0,
                    double t_end, const Tolerance& tol) {
  const std::size_t n = y0.size();
  const double d0 = rms_norm(y0, y0, tol);
  const double d1 = rms_norm(f0, y0, tol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t_end);
  std::vector<double> y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
  f(h0, y1, f1);
  for (std::size_t i = 0; i < n; ++i) f1[i] -= f0[i];
  const double d2 = rms_norm(f1, y0, tol) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, t_end});
}

double hermite(double t0, double t1, double y0, double y1, double d0, double d1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * d1;
}

}  // namespace

std::span<const double> Trajectory::state(std::size_t node) const {
  return {states_.data() + node * dim_, dim_};
}

std::span<const double> Trajectory::derivative(std::size_t node) const {
  return {derivs_.data() + node * dim_, dim_};
}

std::size_t Trajectory::locate(double t) const {
  // last node with times_[i] <= t, clamped so that [i, i+1] is a valid interval
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  if (i + 1 >= times_.size()) i = times_.size() >= 2 ? times_.size() - 2 : 0;
  return i;
}

double Trajectory::interpolate(double t, std::size_t component) const {
  if (times_.size() == 1) return states_[component];
  const std::size_t i = locate(t);
  return hermite(times_[i], times_[i + 1], value(i, component), value(i + 1, component),
                 derivs_[i * dim_ + component], derivs_[(i + 1) * dim_ + component], t);
}

std::vector<double> Trajectory::interpolate(double t) const {
  std::vector<double> out(dim_);
  for (std::size_t c = 0; c < dim_; ++c) out[c] = interpolate(t, c);
  return out;
}

std::vector<double> Trajectory::refine(double t) const {
  if (!system_) return interpolate(t);
  std::size_t i = locate(t);
  if (i + 1 < times_.size() && times_[i + 1] <= t) ++i;
  const double t0 = times_[i];
  const auto y0 = state(i);
  if (t == t0) return {y0.begin(), y0.end()};
  const VectorField& f = system_;
  VectorField shifted = [&f, t0](double s, std::span<const double> y, std::span<double> dy) {
    f(t0 + s, y, dy);
  };
  IntegratorOptions opts;
  opts.tol = tol_;
  if (t < t0) throw ConfigError("refine: time before trajectory start");
  const Trajectory local = integrate_ivp(shifted, y0, t - t0, opts);
  const auto yf = local.final_state();
  return {yf.begin(), yf.end()};
}

Trajectory integrate_ivp(const VectorField& f, std::span<const double> y0, double t_end,
                         const IntegratorOptions& opts) {
  const Tolerance& tol = opts.tol;
  if (!(tol.rel > 0 && tol.rel <= 1e-2 && tol.abs > 0 && tol.abs <= 1e-2))
    throw ConfigError("integrate_ivp: tolerances must lie in (0, 1e-2]");
  if (!(t_end >= 0) || !std::isfinite(t_end))
    throw ConfigError("integrate_ivp: t_end must be finite and non-negative");
  if (y0.empty()) throw ConfigError("integrate_ivp: empty state");

  const std::size_t n = y0.size();
  Trajectory traj;
  traj.dim_ = n;
  traj.tol_ = tol;
  traj.system_ = f;

  std::vector<double> y(y0.begin(), y0.end());
  std::array<std::vector<double>, 7> k;
  for (auto& v : k) v.assign(n, 0.0);
  std::vector<double> tmp(n), ynew(n), err(n), scale_ref(n);

  f(0.0, y, k[0]);
  if (!all_finite(y) || !all_finite(k[0]))
    throw NumericalError("integrate_ivp: non-finite initial state");

  traj.times_.push_back(0.0);
  traj.states_.insert(traj.states_.end(), y.begin(), y.end());
  traj.derivs_.insert(traj.derivs_.end(), k[0].begin(), k[0].end());
  if (t_end == 0.0) return traj;

  double h = initial_step(f, y, k[0], t_end, tol);
  if (opts.max_step > 0) h = std::min(h, opts.max_step);
  double t = 0.0;
  bool last_rejected = false;
  std::size_t steps = 0;

  while (t < t_end) {
    if (++steps > opts.max_steps)
      throw NumericalError("integrate_ivp: step budget exhausted at t = " + std::to_string(t));
    bool final_step = false;
    if (t + h >= t_end || t + 1.01 * h >= t_end) {
      h = t_end - t;
      final_step = true;
    }
    // a short closing step is legitimate; only a shrinking interior step underflows
    if (!final_step && h <= 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw NumericalError("integrate_ivp: step size underflow at t = " + std::to_string(t));

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
    f(t + c2 * h, tmp, k[1]);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    f(t + c3 * h, tmp, k[2]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    f(t + c4 * h, tmp, k[3]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    f(t + c5 * h, tmp, k[4]);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                           a65 * k[4][i]);
    f(t + h, tmp, k[5]);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] +
                            a76 * k[5][i]);
    f(t + h, ynew, k[6]);

    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                    e7 * k[6][i]);
      scale_ref[i] = std::max(std::abs(y[i]), std::abs(ynew[i]));
    }
    const double en = rms_norm(err, scale_ref, tol);

    if (!std::isfinite(en) || !all_finite(ynew)) {
      // Treat as a rejected step; a genuine blow-up ends in underflow.
      if (!all_finite(y)) throw NumericalError("integrate_ivp: non-finite state");
      h *= kMinFactor;
      last_rejected = true;
      ++traj.rejected_;
      if (h < 1e-14 * std::max(1.0, t_end))
        throw NumericalError("integrate_ivp: non-finite state near t = " + std::to_string(t));
      continue;
    }

    if (en <= 1.0) {
      t = final_step ? t_end : t + h;
      y.swap(ynew);
      std::swap(k[0], k[6]);
      traj.times_.push_back(t);
      traj.states_.insert(traj.states_.end(), y.begin(), y.end());
      traj.derivs_.insert(traj.derivs_.end(), k[0].begin(), k[0].end());
      traj.max_error_ratio_ = std::max(traj.max_error_ratio_, en);
      if (opts.stop && opts.stop(t, y)) break;
      double fac = en == 0.0 ? kMaxFactor : kSafety * std::pow(en, -0.2);
      fac = std::clamp(fac, kMinFactor, last_rejected ? 1.0 : kMaxFactor);
      h *= fac;
      if (opts.max_step > 0) h = std::min(h, opts.max_step);
      last_rejected = false;
    } else {
      h *= std::max(kMinFactor, kSafety * std::pow(en, -0.2));
      last_rejected = true;
      ++traj.rejected_;
    }
  }
  return traj;
}

std::vector<double> integrate_fixed(const VectorField& f, std::span<const double> y0, double t_end,
                                    int steps) {
  if (steps < 1) throw ConfigError("integrate_fixed: steps must be positive");
  const std::size_t n = y0.size();
  const double h = t_end / steps;
  std::vector<double> y(y0.begin(), y0.end()), tmp(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n);
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    f(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y[i] += h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    if (!all_finite(y)) throw NumericalError("integrate_fixed: non-finite state");
  }
  return y;
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {a, b, kron * hl, std::abs((kron - gauss) * hl)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol) {
  if (a == b) return 0.0;
  constexpr int kMaxSegments = 4000;
  std::priority_queue<Segment> heap;
  heap.push(gk15(f, a, b));
  double total = heap.top().value, err = heap.top().error;
  for (int it = 0; it < kMaxSegments; ++it) {
    if (!std::isfinite(total)) throw NumericalError("integrate: non-finite integrand");
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) return total;
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Recompute sums to shed accumulated drift before the final verdict.
  total = 0.0;
  err = 0.0;
  for (auto h = heap; !h.empty(); h.pop()) {
    total += h.top().value;
    err += h.top().error;
  }
  if (err <= std::max(abs_tol, rel_tol * std::abs(total))) return total;
  throw NumericalError("integrate: quadrature did not converge");
}

double solution_map(const ForcedOscillatorSpec& spec, double t, double abs_tol) {
  if (!(spec.omega > 0) || !std::isfinite(spec.omega))
    throw ConfigError("solution_map: omega must be positive");
  if (!spec.forcing) throw ConfigError("solution_map: missing forcing");
  const double w = spec.omega;
  const auto kernel = [&](double tau) { return std::sin(w * (t - tau)) / w * spec.forcing(tau); };
  return integrate(kernel, 0.0, t, abs_tol, 1e-13);
}

std::optional<double> first_zero(const Trajectory& traj, std::size_t component,
                                 const ZeroOptions& opts) {
  if (component >= traj.dim() || traj.size() < 2)
    throw ConfigError("first_zero: invalid component or empty trajectory");
  const auto times = traj.times();
  double ta = std::min(opts.t_exclude, traj.t_end());
  double fa = traj.interpolate(ta, component);
  std::size_t i = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), ta) -
                                           times.begin());
  // Skip an exact zero at the window edge so the reference sign is meaningful.
  while (fa == 0.0 && i < times.size()) {
    ta = times[i];
    fa = traj.value(i, component);
    ++i;
  }
  if (fa == 0.0) return std::nullopt;

  double tb = ta, fb = fa;
  bool found = false;
  for (; i < times.size(); ++i) {
    tb = times[i];
    fb = traj.value(i, component);
    if (fb == 0.0) return tb;
    if ((fb > 0) != (fa > 0)) {
      found = true;
      break;
    }
    ta = tb;
    fa = fb;
  }
  if (!found) return std::nullopt;

  // Bisection on the dense output gives a bracketed guess; secant polishing
  // against re-integrated values removes the interpolation error.
  double lo = ta, hi = tb, flo = fa;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = traj.interpolate(mid, component);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double root = 0.5 * (lo + hi);

  // Illinois iteration on re-integrated values, kept inside the node bracket.
  double a = ta, b = tb;
  double ga = traj.refine(a)[component], gb = traj.refine(b)[component];
  double g = traj.refine(root)[component];
  int side = 0;
  for (int it = 0; it < 60 && std::abs(g) > opts.zero_tol; ++it) {
    if ((g > 0) == (ga > 0)) {
      a = root;
      ga = g;
      if (side == -1) gb *= 0.5;
      side = -1;
    } else {
      b = root;
      gb = g;
      if (side == 1) ga *= 0.5;
      side = 1;
    }
    if (b - a < 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, b)) break;
    double next = b - gb * (b - a) / (gb - ga);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    root = next;
    g = traj.refine(root)[component];
  }
  return root;
}

}  // namespace ccurv::ode
