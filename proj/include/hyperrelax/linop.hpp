#pragma once

#include <map>
#include <string>
#include <tuple>

#include "hyperrelax/jet.hpp"

namespace hyperrelax {

/// Linear differential expression sum c * tau^p * d_t^a d_x^b w in a single
/// profile w, kept symbolically in tau.
class LinOp {
 public:
  using Key = std::tuple<int, int, int>;  // (tau power, t order, x order)

  LinOp() = default;
  /// c * tau^p * d_t^a d_x^b w.
  static LinOp term(double c, int p, int a, int b);
  static LinOp identity() { return term(1.0, 0, 0, 0); }

  const std::map<Key, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  LinOp dt() const;
  LinOp dx() const;
  LinOp times_tau(int k = 1) const;
  /// Exact division by tau^k; throws if a term has a lower tau power.
  LinOp div_tau(int k = 1) const;
  /// x-primitive with zero integration constant; every term must carry b >= 1.
  LinOp primitive_x() const;
  /// Only the terms with tau power p, as a tau-free expression.
  LinOp tau_power(int p) const;

  LinOp& operator+=(const LinOp& o);
  LinOp& operator-=(const LinOp& o);
  LinOp& operator*=(double c);
  friend LinOp operator+(LinOp a, const LinOp& b) { return a += b; }
  friend LinOp operator-(LinOp a, const LinOp& b) { return a -= b; }
  friend LinOp operator*(double c, LinOp a) { return a *= c; }
  friend LinOp operator-(LinOp a) { return a *= -1.0; }
  friend bool operator==(const LinOp& a, const LinOp& b) { return (a - b).is_zero(); }

  /// Highest a + b over all terms (-1 for the zero expression).
  int max_order() const;
  double evaluate(double tau, const Jet& w) const;
  /// Largest single-term magnitude at (tau, w), the scale for cancellation checks.
  double max_term(double tau, const Jet& w) const;
  std::string to_string() const;

 private:
  void add(const Key& k, double c);
  std::map<Key, double> terms_;
};

}  // namespace hyperrelax
