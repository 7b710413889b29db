#pragma once

#include <array>
#include <cstddef>

namespace hyperrelax {

constexpr std::size_t jet_size(int order) { return static_cast<std::size_t>((order + 1) * (order + 2) / 2); }

/// Truncated bivariate Taylor polynomial in (t, x) about a point, holding all
/// coefficients c_ab with a + b <= order. Arithmetic and elementary functions
/// propagate the coefficients exactly up to the truncation order, so
/// derivative(a, b) returns the mixed partial d^a/dt^a d^b/dx^b of the
/// expression at the expansion point.
class Jet {
 public:
  static constexpr int kMaxOrder = 12;

  explicit Jet(int order = 0, double constant = 0.0);
  /// The coordinate functions t and x themselves, expanded at t0 or x0.
  static Jet variable_t(int order, double t0);
  static Jet variable_x(int order, double x0);

  int order() const { return order_; }
  double value() const { return c_[0]; }
  double coeff(int a, int b) const;
  double& coeff_ref(int a, int b);
  /// a! b! c_ab; zero when a + b exceeds the order.
  double derivative(int a, int b) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator+=(double v);
  Jet& operator*=(double v);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double v) { return a += v; }
  friend Jet operator+(double v, Jet a) { return a += v; }
  friend Jet operator-(Jet a, double v) { return a += -v; }
  friend Jet operator-(double v, const Jet& a);
  friend Jet operator-(const Jet& a);
  friend Jet operator*(Jet a, double v) { return a *= v; }
  friend Jet operator*(double v, Jet a) { return a *= v; }
  friend Jet operator/(Jet a, double v) { return a *= 1.0 / v; }
  friend Jet operator/(double v, const Jet& a);

  friend Jet sin(const Jet& u);
  friend Jet cos(const Jet& u);
  friend Jet exp(const Jet& u);
  friend Jet sinh(const Jet& u);
  friend Jet cosh(const Jet& u);
  friend Jet tanh(const Jet& u);
  friend Jet sqrt(const Jet& u);
  friend Jet reciprocal(const Jet& u);

  static constexpr std::size_t size_for(int order) { return jet_size(order); }

 private:
  static constexpr std::size_t index(int a, int b) {
    const int d = a + b;
    return static_cast<std::size_t>(d * (d + 1) / 2 + b);
  }
  /// sum_k f_k (u - u0)^k with f_k = f^(k)(u0) / k!, evaluated by Horner.
  template <class Coeffs>
  static Jet compose(const Jet& u, Coeffs&& taylor);

  int order_;
  std::array<double, jet_size(kMaxOrder)> c_{};
};

}  // namespace hyperrelax
