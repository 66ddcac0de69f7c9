#include "ccurv/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccurv/error.hpp"

namespace ccurv {

namespace {

// Node first derivatives of the natural cubic spline through uniform samples.
std::vector<double> spline_slopes(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> m(n, 0.0), d(n, 0.0);
  if (n >= 3) {
    // Thomas algorithm on M[i-1] + 4 M[i] + M[i+1] = rhs, natural ends.
    std::vector<double> c(n, 0.0), r(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double rhs = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
      const double denom = 4.0 - (i > 1 ? c[i - 1] : 0.0);
      c[i] = 1.0 / denom;
      r[i] = (rhs - (i > 1 ? r[i - 1] : 0.0)) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m[i] = r[i] - c[i] * m[i + 1];
      if (i == 1) break;
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    d[i] = (y[i + 1] - y[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
  d[n - 1] = (y[n - 1] - y[n - 2]) / h + h * (m[n - 2] + 2.0 * m[n - 1]) / 6.0;
  return d;
}

struct Basis {
  std::array<double, 4> v, d, dd;
};

// Cubic Hermite basis on a cell of width h, with slope slots pre-scaled by h.
Basis hermite_basis(double s, double h) {
  const double s2 = s * s, s3 = s2 * s;
  Basis b;
  b.v = {2 * s3 - 3 * s2 + 1, h * (s3 - 2 * s2 + s), -2 * s3 + 3 * s2, h * (s3 - s2)};
  b.d = {(6 * s2 - 6 * s) / h, 3 * s2 - 4 * s + 1, (-6 * s2 + 6 * s) / h, 3 * s2 - 2 * s};
  b.dd = {(12 * s - 6) / (h * h), (6 * s - 4) / h, (-12 * s + 6) / (h * h), (6 * s - 2) / h};
  return b;
}

// Tensor-product natural bicubic spline, stored as node values and
// derivatives; on each cell it is the bicubic Hermite patch of that data.
class BicubicSpline {
 public:
  explicit BicubicSpline(const CurvatureTable& t) : t_(t) {
    const auto n1 = static_cast<std::size_t>(t.n1), n2 = static_cast<std::size_t>(t.n2);
    h1_ = (t.x1_max - t.x1_min) / static_cast<double>(n1 - 1);
    h2_ = (t.x2_max - t.x2_min) / static_cast<double>(n2 - 1);
    f_ = t.values;
    fx_.assign(n1 * n2, 0.0);
    fy_.assign(n1 * n2, 0.0);
    fxy_.assign(n1 * n2, 0.0);
    std::vector<double> line;
    for (std::size_t j = 0; j < n2; ++j) {
      line.assign(f_.begin() + static_cast<std::ptrdiff_t>(j * n1),
                  f_.begin() + static_cast<std::ptrdiff_t>((j + 1) * n1));
      const auto d = spline_slopes(line, h1_);
      std::copy(d.begin(), d.end(), fx_.begin() + static_cast<std::ptrdiff_t>(j * n1));
    }
    for (std::size_t i = 0; i < n1; ++i) {
      line.resize(n2);
      for (std::size_t j = 0; j < n2; ++j) line[j] = f_[j * n1 + i];
      auto d = spline_slopes(line, h2_);
      for (std::size_t j = 0; j < n2; ++j) fy_[j * n1 + i] = d[j];
      for (std::size_t j = 0; j < n2; ++j) line[j] = fx_[j * n1 + i];
      d = spline_slopes(line, h2_);
      for (std::size_t j = 0; j < n2; ++j) fxy_[j * n1 + i] = d[j];
    }
  }

  CurvatureJet jet(double x1, double x2) const {
    if (x1 < t_.x1_min - 1e-12 || x1 > t_.x1_max + 1e-12 || x2 < t_.x2_min - 1e-12 ||
        x2 > t_.x2_max + 1e-12)
      throw NumericalError("user-table field evaluated outside its table domain");
    const auto [i, s] = cell(x1, t_.x1_min, h1_, t_.n1);
    const auto [j, u] = cell(x2, t_.x2_min, h2_, t_.n2);
    const Basis bx = hermite_basis(s, h1_), by = hermite_basis(u, h2_);
    const auto n1 = static_cast<std::size_t>(t_.n1);
    const auto at = [&](const std::vector<double>& a, std::size_t di, std::size_t dj) {
      return a[(j + dj) * n1 + i + di];
    };
    // corner data, rows indexed by x-slot, columns by y-slot
    std::array<std::array<double, 4>, 4> c{};
    for (std::size_t di = 0; di < 2; ++di) {
      for (std::size_t dj = 0; dj < 2; ++dj) {
        c[2 * di][2 * dj] = at(f_, di, dj);
        c[2 * di][2 * dj + 1] = at(fy_, di, dj);
        c[2 * di + 1][2 * dj] = at(fx_, di, dj);
        c[2 * di + 1][2 * dj + 1] = at(fxy_, di, dj);
      }
    }
    CurvatureJet out;
    for (std::size_t p = 0; p < 4; ++p) {
      for (std::size_t q = 0; q < 4; ++q) {
        out.k += bx.v[p] * by.v[q] * c[p][q];
        out.k1 += bx.d[p] * by.v[q] * c[p][q];
        out.k2 += bx.v[p] * by.d[q] * c[p][q];
        out.k11 += bx.dd[p] * by.v[q] * c[p][q];
        out.k12 += bx.d[p] * by.d[q] * c[p][q];
        out.k22 += bx.v[p] * by.dd[q] * c[p][q];
      }
    }
    return out;
  }

 private:
  static std::pair<std::size_t, double> cell(double x, double x0, double h, int n) {
    double k = std::floor((x - x0) / h);
    k = std::clamp(k, 0.0, static_cast<double>(n - 2));
    return {static_cast<std::size_t>(k), (x - x0) / h - k};
  }

  CurvatureTable t_;
  double h1_ = 0, h2_ = 0;
  std::vector<double> f_, fx_, fy_, fxy_;
};

}  // namespace

struct CurvatureField::Impl {
  Family family = Family::constant;
  double floor = 1.0;
  double amplitude = 0.0;
  double kappa0 = 1.0;
  double min_k = 1.0;
  double max_k = 1.0;
  FieldParams params;
  std::shared_ptr<const BicubicSpline> spline;

  CurvatureJet jet(double x1, double x2) const {
    const FieldParams& p = params;
    const double half = 0.5 * amplitude;
    CurvatureJet j;
    switch (family) {
      case Family::constant:
        j.k = floor;
        break;
      case Family::cosine_bump: {
        const double a = p.wave1 * x1 + p.wave2 * x2 + p.phase;
        const double s = std::sin(a), c = std::cos(a);
        j.k = floor + half * (1.0 + c);
        j.k1 = -half * p.wave1 * s;
        j.k2 = -half * p.wave2 * s;
        j.k11 = -half * p.wave1 * p.wave1 * c;
        j.k12 = -half * p.wave1 * p.wave2 * c;
        j.k22 = -half * p.wave2 * p.wave2 * c;
        break;
      }
      case Family::product_wave: {
        const double a = p.wave1 * x1 + p.phase, b = p.wave2 * x2 + p.phase2;
        const double sa = std::sin(a), ca = std::cos(a), sb = std::sin(b), cb = std::cos(b);
        j.k = floor + half * (1.0 + ca * cb);
        j.k1 = -half * p.wave1 * sa * cb;
        j.k2 = -half * p.wave2 * ca * sb;
        j.k11 = -half * p.wave1 * p.wave1 * ca * cb;
        j.k12 = half * p.wave1 * p.wave2 * sa * sb;
        j.k22 = -half * p.wave2 * p.wave2 * ca * cb;
        break;
      }
      case Family::user_table:
        j = spline->jet(x1, x2);
        break;
    }
    return j;
  }
};

std::string_view to_string(Family f) {
  switch (f) {
    case Family::constant:
      return "constant";
    case Family::cosine_bump:
      return "cosine-bump";
    case Family::product_wave:
      return "product-wave";
    case Family::user_table:
      return "user-table";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  if (s == "constant") return Family::constant;
  if (s == "cosine-bump") return Family::cosine_bump;
  if (s == "product-wave") return Family::product_wave;
  if (s == "user-table") return Family::user_table;
  throw ConfigError("unknown field family '" + std::string(s) + "'");
}

Family CurvatureField::family() const { return impl_->family; }
double CurvatureField::kappa0() const { return impl_->kappa0; }
double CurvatureField::amplitude() const { return impl_->amplitude; }
const FieldParams& CurvatureField::params() const { return impl_->params; }
const Patch& CurvatureField::patch() const { return impl_->params.patch; }
CurvatureJet CurvatureField::jet(double x1, double x2) const { return impl_->jet(x1, x2); }
double CurvatureField::min_K() const { return impl_->min_k; }
double CurvatureField::max_K() const { return impl_->max_k; }
bool CurvatureField::is_flat() const {
  return impl_->family == Family::constant && impl_->floor == 0.0;
}

std::string CurvatureField::describe() const {
  std::ostringstream os;
  os.precision(9);
  os << to_string(impl_->family) << " kappa0=" << impl_->kappa0;
  if (impl_->family == Family::cosine_bump || impl_->family == Family::product_wave)
    os << " amplitude=" << impl_->amplitude << " wave=(" << impl_->params.wave1 << ","
       << impl_->params.wave2 << ")";
  return os.str();
}

CurvatureField make_field(Family family, double kappa0, double amplitude,
                          const FieldParams& params) {
  auto impl = std::make_shared<CurvatureField::Impl>();
  impl->family = family;
  impl->params = params;
  const Patch& patch = params.patch;
  if (!(patch.x1_max > 0) || !(patch.x2_max > patch.x2_min) || !std::isfinite(patch.x1_max) ||
      !std::isfinite(patch.x2_min) || !std::isfinite(patch.x2_max))
    throw ConfigError("invalid patch bounds");
  if (!std::isfinite(kappa0) || !std::isfinite(amplitude))
    throw ConfigError("field parameters must be finite");
  if (amplitude < 0) throw ConfigError("amplitude must be non-negative");

  const bool flat = family == Family::constant && kappa0 == 0.0;
  if (flat && !params.allow_flat)
    throw ConfigError("the flat field K = 0 is validation-only; set allow_flat=true");
  if (!flat && family != Family::user_table && kappa0 < 1.0)
    throw ConfigError("kappa0 must be >= 1 (fields are normalized to min K = 1)");
  if (kappa0 > 100.0) throw ConfigError("kappa0 above the supported range (<= 100)");

  switch (family) {
    case Family::constant:
      if (amplitude != 0.0) throw ConfigError("the constant family takes no amplitude");
      break;
    case Family::cosine_bump:
    case Family::product_wave:
      if (amplitude > 10.0) throw ConfigError("amplitude above the supported range (<= 10)");
      if (!std::isfinite(params.wave1) || !std::isfinite(params.wave2) ||
          std::abs(params.wave1) > 50.0 || std::abs(params.wave2) > 50.0)
        throw ConfigError("wave numbers must satisfy |wave| <= 50");
      if (!std::isfinite(params.phase) || !std::isfinite(params.phase2))
        throw ConfigError("phases must be finite");
      break;
    case Family::user_table: {
      const CurvatureTable& t = params.table;
      if (t.n1 < 4 || t.n2 < 4)
        throw ConfigError("user-table needs at least 4 x 4 samples");
      if (t.values.size() != static_cast<std::size_t>(t.n1) * static_cast<std::size_t>(t.n2))
        throw ConfigError("user-table value count does not match n1 * n2");
      if (!(t.x1_max > t.x1_min) || !(t.x2_max > t.x2_min))
        throw ConfigError("user-table domain is empty");
      if (t.x1_min > -patch.x1_max || t.x1_max < patch.x1_max || t.x2_min > patch.x2_min ||
          t.x2_max < patch.x2_max)
        throw ConfigError("user-table domain must cover the patch");
      for (double v : t.values)
        if (!std::isfinite(v)) throw ConfigError("user-table contains non-finite values");
      impl->spline = std::make_shared<BicubicSpline>(t);
      break;
    }
  }
  impl->floor = family == Family::user_table ? 0.0 : kappa0;
  impl->amplitude = family == Family::constant || family == Family::user_table ? 0.0 : amplitude;

  // Dense sampling of the patch: enforces K >= 1 and records the extremes.
  constexpr int kSamples = 201;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int a = 0; a < kSamples; ++a) {
    const double x1 = -patch.x1_max + 2.0 * patch.x1_max * a / (kSamples - 1);
    for (int b = 0; b < kSamples; ++b) {
      const double x2 = patch.x2_min + (patch.x2_max - patch.x2_min) * b / (kSamples - 1);
      const double k = impl->jet(x1, x2).k;
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  if (!flat && lo < 1.0 - 1e-12)
    throw ConfigError("field violates K >= 1 on the patch (min sampled K = " +
                      std::to_string(lo) + ")");
  impl->min_k = lo;
  switch (family) {
    case Family::constant:
      impl->max_k = kappa0;
      break;
    case Family::cosine_bump:
    case Family::product_wave:
      impl->max_k = kappa0 + amplitude;
      break;
    case Family::user_table:
      // Spline overshoot between samples is bounded by a small fraction of the spread.
      impl->max_k = hi + 0.05 * (hi - lo);
      impl->amplitude = hi - lo;
      break;
  }
  impl->kappa0 = impl->jet(0.0, 0.0).k;

  CurvatureField field;
  field.impl_ = std::move(impl);
  return field;
}

namespace {

void check_inside(const CurvatureField& field, double x1, double x2) {
  const Patch& p = field.patch();
  if (std::abs(x1) > p.x1_max * (1 + 1e-12) || x2 < p.x2_min || x2 > p.x2_max)
    throw ConfigError("point outside the field patch");
}

// state: w, dw/ds, u = dw/dx2, du/ds along s = sign * x1
void metric_rhs(const CurvatureField& field, double sign, double x2, double s, const double* y,
                double* dy) {
  const CurvatureJet j = field.jet(sign * s, x2);
  dy[0] = y[1];
  dy[1] = -j.k * y[0];
  dy[2] = y[3];
  dy[3] = -j.k2 * y[0] - j.k * y[2];
}

}  // namespace

FermiMetricSample reconstruct_metric(const CurvatureField& field, double x2, double x1,
                                     const ode::Tolerance& tol) {
  check_inside(field, x1, x2);
  FermiMetricSample out{1.0, 0.0, 0.0, x1, x2};
  if (x1 == 0.0) return out;
  const double sign = x1 > 0 ? 1.0 : -1.0;
  ode::VectorField f = [&field, sign, x2](double s, std::span<const double> y,
                                          std::span<double> dy) {
    metric_rhs(field, sign, x2, s, y.data(), dy.data());
  };
  const std::array<double, 4> y0{1.0, 0.0, 0.0, 0.0};
  ode::IntegratorOptions opts;
  opts.tol = tol;
  opts.stop = [](double, std::span<const double> y) { return y[0] <= kMetricFloor; };
  const ode::Trajectory traj = ode::integrate_ivp(f, y0, std::abs(x1), opts);
  const auto y = traj.final_state();
  if (y[0] <= kMetricFloor)
    throw NumericalError("metric degenerates (sqrt G <= 0.1) before x1 = " + std::to_string(x1));
  out.w = y[0];
  out.dw_dx1 = sign * y[1];
  out.dw_dx2 = y[2];
  return out;
}

FermiMetricSample metric_smooth(const CurvatureField& field, double x1, double x2) {
  FermiMetricSample out{1.0, 0.0, 0.0, x1, x2};
  if (x1 == 0.0) return out;
  const double sign = x1 > 0 ? 1.0 : -1.0;
  const double len = std::abs(x1);
  if (field.family() == Family::constant) {
    const double k = field.kappa0();
    const double r = std::sqrt(k);
    out.w = k == 0.0 ? 1.0 : std::cos(r * len);
    out.dw_dx1 = k == 0.0 ? 0.0 : -sign * r * std::sin(r * len);
    if (out.w <= kMetricFloor) throw NumericalError("metric degenerates (sqrt G <= 0.1)");
    return out;
  }
  // Fixed-step Dormand–Prince fifth-order solution, no error control.
  const int steps = std::max(2, static_cast<int>(std::ceil(len / 0.01)));
  const double h = len / steps;
  std::array<double, 4> y{1.0, 0.0, 0.0, 0.0};
  std::array<std::array<double, 4>, 6> k{};
  std::array<double, 4> tmp{};
  static constexpr double a[6][5] = {
      {0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656}};
  static constexpr double c[6] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1};
  static constexpr double b[6] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                  11.0 / 84};
  for (int n = 0; n < steps; ++n) {
    const double s = n * h;
    for (int st = 0; st < 6; ++st) {
      for (int i = 0; i < 4; ++i) {
        double acc = y[i];
        for (int q = 0; q < st; ++q) acc += h * a[st][q] * k[q][i];
        tmp[i] = acc;
      }
      metric_rhs(field, sign, x2, s + c[st] * h, tmp.data(), k[st].data());
    }
    for (int i = 0; i < 4; ++i) {
      double acc = 0.0;
      for (int st = 0; st < 6; ++st) acc += b[st] * k[st][i];
      y[i] += h * acc;
    }
    if (y[0] <= kMetricFloor) throw NumericalError("metric degenerates (sqrt G <= 0.1)");
  }
  out.w = y[0];
  out.dw_dx1 = sign * y[1];
  out.dw_dx2 = y[2];
  return out;
}

C2NormEstimate c2_norm_estimate(const CurvatureField& field, const Patch& patch, int n1, int n2) {
  if (n1 < 32 || n2 < 32) throw ConfigError("c2_norm_estimate needs a grid of at least 32 x 32");
  const Patch& fp = field.patch();
  if (patch.x1_max > fp.x1_max || patch.x2_min < fp.x2_min || patch.x2_max > fp.x2_max)
    throw ConfigError("c2_norm_estimate patch exceeds the field patch");

  C2NormEstimate best;
  best.value = -1.0;
  ode::IntegratorOptions opts;
  opts.tol = {1e-11, 1e-13};
  opts.max_step = 0.01;
  const std::array<double, 4> y0{1.0, 0.0, 0.0, 0.0};

  for (int jx = 0; jx < n2; ++jx) {
    const double x2 = patch.x2_min + (patch.x2_max - patch.x2_min) * jx / (n2 - 1);
    // One trajectory per half-line; nodes are read from the dense output so
    // that nested grids see identical values at shared nodes.
    std::array<ode::Trajectory, 2> half;
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      ode::VectorField f = [&field, sign, x2](double s, std::span<const double> y,
                                              std::span<double> dy) {
        metric_rhs(field, sign, x2, s, y.data(), dy.data());
      };
      half[side] = ode::integrate_ivp(f, y0, patch.x1_max, opts);
      for (std::size_t n = 0; n < half[side].size(); ++n)
        if (half[side].value(n, 0) <= kMetricFloor)
          throw NumericalError("patch exits metric validity (sqrt G <= 0.1)");
    }
    for (int ix = 0; ix < n1; ++ix) {
      const double x1 = -patch.x1_max + 2.0 * patch.x1_max * ix / (n1 - 1);
      const int side = x1 >= 0 ? 0 : 1;
      const double s = std::abs(x1);
      const double w = half[side].interpolate(s, 0);
      const double w1 = (side == 0 ? 1.0 : -1.0) * half[side].interpolate(s, 1);
      const double w2 = half[side].interpolate(s, 2);
      const CurvatureJet j = field.jet(x1, x2);
      const double g = w * w;
      const double dev = std::abs(j.k - 1.0);
      const double grad = std::sqrt(j.k1 * j.k1 + j.k2 * j.k2 / g);
      const double h11 = j.k11;
      const double h12 = j.k12 - (w1 / w) * j.k2;
      const double h22 = j.k22 + w * w1 * j.k1 - (w2 / w) * j.k2;
      const double hess = std::sqrt(h11 * h11 + 2.0 * h12 * h12 / g + h22 * h22 / (g * g));
      const double total = dev + grad + hess;
      if (total > best.value) best = {total, dev, grad, hess, x1, x2};
    }
  }
  return best;
}

double c2_norm(const CurvatureField& field, int n1, int n2) {
  return c2_norm_estimate(field, field.patch(), n1, n2).value;
}

}  // namespace ccurv
