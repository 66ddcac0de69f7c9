#pragma once

#include <vector>

namespace ccurv {

/// Truncated Laurent series sum_k c_k x^(valuation + k), known modulo x^order.
///
/// Only what the removable-singularity integrands need: ring operations,
/// division by a series with non-vanishing leading term, and sin/cos of a
/// series without constant term. Additions snap coefficients that cancel to
/// rounding level to exact zeros so that valuations come out right.
class PowerSeries {
 public:
  static constexpr int kDefaultOrder = 48;

  PowerSeries() = default;
  PowerSeries(double c, int order = kDefaultOrder);  // NOLINT(implicit)

  static PowerSeries variable(int order = kDefaultOrder);

  int valuation() const { return val_; }
  int order() const { return order_; }
  /// Coefficient of x^n (0 outside the stored range).
  double coeff(int n) const;
  const std::vector<double>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  /// Horner evaluation of the stored terms.
  double operator()(double x) const;

  PowerSeries operator-() const;
  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  PowerSeries& operator*=(const PowerSeries& o);
  PowerSeries& operator/=(const PowerSeries& o);

  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(PowerSeries a, const PowerSeries& b) { return a *= b; }
  friend PowerSeries operator/(PowerSeries a, const PowerSeries& b) { return a /= b; }
  friend PowerSeries operator+(PowerSeries a, double b) { return a += PowerSeries(b, a.order_); }
  friend PowerSeries operator+(double a, PowerSeries b) { return b += PowerSeries(a, b.order_); }
  friend PowerSeries operator-(PowerSeries a, double b) { return a -= PowerSeries(b, a.order_); }
  friend PowerSeries operator-(double a, const PowerSeries& b) {
    return PowerSeries(a, b.order_) - b;
  }
  friend PowerSeries operator*(PowerSeries a, double b) { return a.scale(b); }
  friend PowerSeries operator*(double a, PowerSeries b) { return b.scale(a); }
  friend PowerSeries operator/(PowerSeries a, double b) { return a.scale(1.0 / b); }
  friend PowerSeries operator/(double a, const PowerSeries& b) {
    return PowerSeries(a, b.order_ - b.val_) / b;
  }

  friend PowerSeries sin(const PowerSeries& x);
  friend PowerSeries cos(const PowerSeries& x);

 private:
  PowerSeries& scale(double s);
  void normalize();

  int val_ = 0;
  int order_ = kDefaultOrder;
  std::vector<double> c_;
};

PowerSeries sin(const PowerSeries& x);
PowerSeries cos(const PowerSeries& x);

}  // namespace ccurv
