#include "hyperrelax/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

namespace hyperrelax {

SmoothProfile SmoothProfile::trig_sum(std::vector<TrigMode> modes) {
  for (const TrigMode& m : modes)
    if (m.wavenumber == 0.0) throw DomainError("trig_sum modes need a nonzero wavenumber");
  SmoothProfile p;
  p.kind_ = ProfileKind::trig_sum;
  p.modes_ = std::move(modes);
  return p;
}

SmoothProfile SmoothProfile::sech_family(std::vector<SechTerm> terms) {
  for (const SechTerm& s : terms)
    if (s.power < 1) throw DomainError("sech_family powers must be positive");
  SmoothProfile p;
  p.kind_ = ProfileKind::sech_family;
  p.sech_ = std::move(terms);
  return p;
}

SmoothProfile SmoothProfile::traveling_wave(const ExactSolution& wave) {
  if (wave.kind == ExactKind::none || wave.kind == ExactKind::biharmonic)
    throw DomainError("traveling_wave needs a solitary-wave solution");
  SmoothProfile p;
  p.kind_ = ProfileKind::traveling_wave;
  p.wave_ = wave;
  return p;
}

SmoothProfile SmoothProfile::random_trig(std::uint64_t seed, int modes, int max_wavenumber) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), om(-2.0, 2.0), ph(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> wn(1, max_wavenumber);
  std::vector<TrigMode> m;
  for (int i = 0; i < modes; ++i) m.push_back({amp(rng), static_cast<double>(wn(rng)), om(rng), ph(rng)});
  return trig_sum(std::move(m));
}

std::string SmoothProfile::describe() const {
  switch (kind_) {
    case ProfileKind::trig_sum: return fmt::format("trig_sum({} modes)", modes_.size());
    case ProfileKind::sech_family: return fmt::format("sech_family({} terms)", sech_.size());
    case ProfileKind::traveling_wave: return fmt::format("traveling_wave(c = {:.6g})", wave_.speed);
  }
  return "profile";
}

template <class S>
S SmoothProfile::eval(const S& t, const S& x) const {
  using std::cosh;
  using std::exp;
  using std::sin;
  S sum = 0.0 * x;
  switch (kind_) {
    case ProfileKind::trig_sum:
      for (const TrigMode& m : modes_) sum = sum + m.amplitude * sin(m.wavenumber * x - m.omega * t + m.phase);
      break;
    case ProfileKind::sech_family:
      for (const SechTerm& s : sech_) {
        const S sech = 1.0 / cosh(s.k * (x - s.center - s.speed * t));
        S p = sech;
        for (int i = 1; i < s.power; ++i) p = p * sech;
        sum = sum + s.amplitude * exp(-s.decay * t) * p;
      }
      break;
    case ProfileKind::traveling_wave:
      sum = exact_solution_value(wave_, nullptr, t, x);
      break;
  }
  return sum;
}

double SmoothProfile::value(double t, double x) const { return eval(t, x); }

Jet SmoothProfile::jet(int order, double t, double x) const {
  return eval(Jet::variable_t(order, t), Jet::variable_x(order, x));
}

double SmoothProfile::derivative(int a, int b, double t, double x) const { return jet(a + b, t, x).derivative(a, b); }

double SmoothProfile::antiderivative_x(double t, double x) const {
  if (kind_ != ProfileKind::trig_sum) throw DomainError("antiderivative_x is only available for trig_sum profiles");
  double s = 0.0;
  for (const TrigMode& m : modes_) s -= m.amplitude / m.wavenumber * std::cos(m.wavenumber * x - m.omega * t + m.phase);
  return s;
}

double SmoothProfile::scale() const {
  double s = 0.0;
  for (const TrigMode& m : modes_) s += std::abs(m.amplitude);
  for (const SechTerm& e : sech_) s += std::abs(e.amplitude);
  if (kind_ == ProfileKind::traveling_wave) s = std::abs(value(0.0, 0.0));
  return std::max(s, 1e-300);
}

double derivative_cross_check(const SmoothProfile& p, int max_order, int points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, 1.0), ux(-3.0, 3.0);
  const double eps = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = ut(rng), x = ux(rng);
    const Jet j = p.jet(max_order, t, x);
    const Jet jt_p = p.jet(max_order, t + eps, x), jt_m = p.jet(max_order, t - eps, x);
    const Jet jx_p = p.jet(max_order, t, x + eps), jx_m = p.jet(max_order, t, x - eps);
    double scale = 0.0;
    for (int d = 0; d <= max_order; ++d)
      for (int a = 0; a <= d; ++a) scale = std::max(scale, std::abs(j.derivative(a, d - a)));
    for (int d = 1; d <= max_order; ++d)
      for (int a = 0; a <= d; ++a) {
        const int b = d - a;
        const double exact = j.derivative(a, b);
        double fd;
        if (a > 0)
          fd = (jt_p.derivative(a - 1, b) - jt_m.derivative(a - 1, b)) / (2.0 * eps);
        else
          fd = (jx_p.derivative(a, b - 1) - jx_m.derivative(a, b - 1)) / (2.0 * eps);
        worst = std::max(worst, std::abs(fd - exact) / std::max(scale, 1e-300));
      }
  }
  return worst;
}

}  // namespace hyperrelax
