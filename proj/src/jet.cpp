#include "hyperrelax/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyperrelax/grid.hpp"

namespace hyperrelax {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Jet::Jet(int order, double constant) : order_(order) {
  if (order < 0 || order > kMaxOrder) throw DomainError("Jet order out of range");
  c_[0] = constant;
}

Jet Jet::variable_t(int order, double t0) {
  Jet j(order, t0);
  if (order >= 1) j.c_[index(1, 0)] = 1.0;
  return j;
}

Jet Jet::variable_x(int order, double x0) {
  Jet j(order, x0);
  if (order >= 1) j.c_[index(0, 1)] = 1.0;
  return j;
}

double Jet::coeff(int a, int b) const {
  if (a < 0 || b < 0 || a + b > order_) return 0.0;
  return c_[index(a, b)];
}

double& Jet::coeff_ref(int a, int b) {
  if (a < 0 || b < 0 || a + b > order_) throw DomainError("Jet coefficient out of range");
  return c_[index(a, b)];
}

double Jet::derivative(int a, int b) const { return factorial(a) * factorial(b) * coeff(a, b); }

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (std::size_t i = 0; i < size_for(order_); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (std::size_t i = 0; i < size_for(order_); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  const int n = std::min(order_, o.order_);
  std::array<double, jet_size(kMaxOrder)> r{};
  for (int d1 = 0; d1 <= n; ++d1)
    for (int b1 = 0; b1 <= d1; ++b1) {
      const double v = c_[index(d1 - b1, b1)];
      if (v == 0.0) continue;
      for (int d2 = 0; d1 + d2 <= n; ++d2)
        for (int b2 = 0; b2 <= d2; ++b2) r[index(d1 - b1 + d2 - b2, b1 + b2)] += v * o.c_[index(d2 - b2, b2)];
    }
  order_ = n;
  c_ = r;
  return *this;
}

Jet& Jet::operator+=(double v) {
  c_[0] += v;
  return *this;
}

Jet& Jet::operator*=(double v) {
  for (std::size_t i = 0; i < size_for(order_); ++i) c_[i] *= v;
  return *this;
}

Jet operator-(double v, const Jet& a) {
  Jet r = -a;
  r += v;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  r *= -1.0;
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator/(double v, const Jet& a) { return v * reciprocal(a); }

template <class Coeffs>
Jet Jet::compose(const Jet& u, Coeffs&& taylor) {
  Jet delta = u;
  delta.c_[0] = 0.0;
  const int n = u.order_;
  Jet r(n, taylor(n));
  for (int k = n - 1; k >= 0; --k) {
    r *= delta;
    r.c_[0] += taylor(k);
  }
  return r;
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return Jet::compose(u, [&](int k) {
    const double v[4] = {s, c, -s, -c};
    return v[k % 4] / factorial(k);
  });
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return Jet::compose(u, [&](int k) {
    const double v[4] = {c, -s, -c, s};
    return v[k % 4] / factorial(k);
  });
}

Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  return Jet::compose(u, [&](int k) { return e / factorial(k); });
}

Jet sinh(const Jet& u) {
  const double s = std::sinh(u.value()), c = std::cosh(u.value());
  return Jet::compose(u, [&](int k) { return (k % 2 == 0 ? s : c) / factorial(k); });
}

Jet cosh(const Jet& u) {
  const double s = std::sinh(u.value()), c = std::cosh(u.value());
  return Jet::compose(u, [&](int k) { return (k % 2 == 0 ? c : s) / factorial(k); });
}

Jet tanh(const Jet& u) { return sinh(u) / cosh(u); }

Jet sqrt(const Jet& u) {
  const double v = u.value();
  if (!(v > 0.0)) throw DomainError("Jet sqrt needs a positive value");
  const double r = std::sqrt(v);
  // Binomial series of sqrt(v + d): r * prod_{i<k} (1/2 - i) / (k! v^k).
  return Jet::compose(u, [&](int k) {
    double c = r;
    for (int i = 0; i < k; ++i) c *= (0.5 - i) / ((i + 1) * v);
    return c;
  });
}

Jet reciprocal(const Jet& u) {
  const double v = u.value();
  if (v == 0.0) throw DomainError("Jet division by a zero value");
  return Jet::compose(u, [&](int k) { return ((k % 2 == 0) ? 1.0 : -1.0) / std::pow(v, k + 1); });
}

}  // namespace hyperrelax
