#include "hyperrelax/linop.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hyperrelax/grid.hpp"

namespace hyperrelax {

void LinOp::add(const Key& k, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

LinOp LinOp::term(double c, int p, int a, int b) {
  if (p < 0 || a < 0 || b < 0) throw DomainError("LinOp::term: negative power or order");
  LinOp r;
  r.add({p, a, b}, c);
  return r;
}

LinOp LinOp::dt() const {
  LinOp r;
  for (const auto& [k, c] : terms_) r.add({std::get<0>(k), std::get<1>(k) + 1, std::get<2>(k)}, c);
  return r;
}

LinOp LinOp::dx() const {
  LinOp r;
  for (const auto& [k, c] : terms_) r.add({std::get<0>(k), std::get<1>(k), std::get<2>(k) + 1}, c);
  return r;
}

LinOp LinOp::times_tau(int p) const {
  LinOp r;
  for (const auto& [k, c] : terms_) r.add({std::get<0>(k) + p, std::get<1>(k), std::get<2>(k)}, c);
  return r;
}

LinOp LinOp::div_tau(int p) const {
  LinOp r;
  for (const auto& [k, c] : terms_) {
    if (std::get<0>(k) < p) throw DomainError("LinOp::div_tau: term without enough powers of tau");
    r.add({std::get<0>(k) - p, std::get<1>(k), std::get<2>(k)}, c);
  }
  return r;
}

LinOp LinOp::primitive_x() const {
  LinOp r;
  for (const auto& [k, c] : terms_) {
    if (std::get<2>(k) < 1) throw DomainError("LinOp::primitive_x: term without an x-derivative");
    r.add({std::get<0>(k), std::get<1>(k), std::get<2>(k) - 1}, c);
  }
  return r;
}

LinOp LinOp::tau_power(int p) const {
  LinOp r;
  for (const auto& [k, c] : terms_)
    if (std::get<0>(k) == p) r.add({0, std::get<1>(k), std::get<2>(k)}, c);
  return r;
}

LinOp& LinOp::operator+=(const LinOp& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

LinOp& LinOp::operator-=(const LinOp& o) {
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

LinOp& LinOp::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

int LinOp::max_order() const {
  int m = -1;
  for (const auto& [k, c] : terms_) m = std::max(m, std::get<1>(k) + std::get<2>(k));
  return m;
}

double LinOp::evaluate(double tau, const Jet& w) const {
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += c * std::pow(tau, std::get<0>(k)) * w.derivative(std::get<1>(k), std::get<2>(k));
  return s;
}

double LinOp::max_term(double tau, const Jet& w) const {
  double m = 0.0;
  for (const auto& [k, c] : terms_)
    m = std::max(m, std::abs(c * std::pow(tau, std::get<0>(k)) * w.derivative(std::get<1>(k), std::get<2>(k))));
  return m;
}

std::string LinOp::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : terms_) {
    const auto [p, a, b] = k;
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    const double ac = std::abs(c);
    if (ac != 1.0) s += fmt::format("{:g} ", ac);
    if (p == 1) s += "tau ";
    if (p > 1) s += fmt::format("tau^{} ", p);
    std::string d;
    for (int i = 0; i < a; ++i) d += 't';
    for (int i = 0; i < b; ++i) d += 'x';
    s += d.empty() ? "w" : "w_" + d;
  }
  return s;
}

}  // namespace hyperrelax
