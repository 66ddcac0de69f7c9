#include "ccurv/series.hpp"

#include <algorithm>
#include <cmath>

#include "ccurv/error.hpp"

namespace ccurv {

namespace {
constexpr double kSnap = 1e-11;
}

PowerSeries::PowerSeries(double c, int order) : val_(0), order_(order) {
  if (c == 0.0) {
    val_ = order_;
  } else {
    c_.assign(static_cast<std::size_t>(std::max(order, 1)), 0.0);
    c_[0] = c;
    if (order_ < 1) order_ = 1;
  }
}

PowerSeries PowerSeries::variable(int order) {
  PowerSeries s;
  s.val_ = 1;
  s.order_ = order;
  s.c_.assign(static_cast<std::size_t>(order - 1), 0.0);
  s.c_[0] = 1.0;
  return s;
}

double PowerSeries::coeff(int n) const {
  const int k = n - val_;
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
  return c_[static_cast<std::size_t>(k)];
}

double PowerSeries::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc * std::pow(x, val_);
}

void PowerSeries::normalize() {
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead] == 0.0) ++lead;
  if (lead == c_.size()) {
    c_.clear();
    val_ = order_;
    return;
  }
  c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
  val_ += static_cast<int>(lead);
}

PowerSeries PowerSeries::operator-() const {
  PowerSeries r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  const int order = std::min(order_, o.order_);
  const int val = std::min(val_, o.val_);
  std::vector<double> out(static_cast<std::size_t>(std::max(order - val, 0)));
  for (int n = val; n < order; ++n) {
    const double a = coeff(n), b = o.coeff(n);
    const double s = a + b;
    out[static_cast<std::size_t>(n - val)] =
        std::abs(s) <= kSnap * std::max(std::abs(a), std::abs(b)) ? 0.0 : s;
  }
  val_ = val;
  order_ = order;
  c_ = std::move(out);
  normalize();
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) { return *this += -o; }

PowerSeries& PowerSeries::operator*=(const PowerSeries& o) {
  const int order = std::min(order_ + o.val_, o.order_ + val_);
  if (is_zero() || o.is_zero()) {
    c_.clear();
    order_ = order;
    val_ = order;
    return *this;
  }
  const int val = val_ + o.val_;
  const std::size_t len = static_cast<std::size_t>(std::max(order - val, 0));
  std::vector<double> out(len, 0.0);
  for (std::size_t i = 0; i < c_.size() && i < len; ++i)
    for (std::size_t j = 0; j < o.c_.size() && i + j < len; ++j) out[i + j] += c_[i] * o.c_[j];
  val_ = val;
  order_ = order;
  c_ = std::move(out);
  normalize();
  return *this;
}

PowerSeries& PowerSeries::operator/=(const PowerSeries& o) {
  if (o.is_zero()) throw NumericalError("PowerSeries: division by a vanishing series");
  if (is_zero()) {
    order_ -= o.val_;
    val_ = order_;
    return *this;
  }
  const int val = val_ - o.val_;
  const int rel = std::min(order_ - val_, o.order_ - o.val_);
  const std::size_t len = static_cast<std::size_t>(std::max(rel, 0));
  std::vector<double> q(len, 0.0);
  for (std::size_t k = 0; k < len; ++k) {
    double acc = k < c_.size() ? c_[k] : 0.0;
    for (std::size_t j = 1; j <= k && j < o.c_.size(); ++j) acc -= o.c_[j] * q[k - j];
    q[k] = acc / o.c_[0];
  }
  val_ = val;
  order_ = val + rel;
  c_ = std::move(q);
  normalize();
  return *this;
}

PowerSeries& PowerSeries::scale(double s) {
  if (s == 0.0) {
    c_.clear();
    val_ = order_;
    return *this;
  }
  for (double& v : c_) v *= s;
  return *this;
}

PowerSeries sin(const PowerSeries& x) {
  if (x.is_zero()) return x;
  if (x.val_ < 1) throw ConfigError("PowerSeries: sin needs a series without constant term");
  const PowerSeries x2 = x * x;
  PowerSeries term = x;
  PowerSeries sum = x;
  for (int k = 1; !term.is_zero() && term.val_ < x.order_; ++k) {
    term *= x2;
    term = term * (-1.0 / ((2.0 * k) * (2.0 * k + 1.0)));
    sum += term;
  }
  return sum;
}

PowerSeries cos(const PowerSeries& x) {
  if (x.is_zero()) return PowerSeries(1.0, x.order_);
  if (x.val_ < 1) throw ConfigError("PowerSeries: cos needs a series without constant term");
  const PowerSeries x2 = x * x;
  PowerSeries term(1.0, x.order_);
  PowerSeries sum(1.0, x.order_);
  for (int k = 1; !term.is_zero() && term.val_ < x.order_; ++k) {
    term *= x2;
    term = term * (-1.0 / ((2.0 * k - 1.0) * (2.0 * k)));
    sum += term;
  }
  return sum;
}

}  // namespace ccurv
