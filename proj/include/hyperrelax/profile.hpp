#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperrelax/jet.hpp"
#include "hyperrelax/models.hpp"

namespace hyperrelax {

enum class ProfileKind { trig_sum, sech_family, traveling_wave };

/// a * sin(k x - omega t + phase); k != 0 keeps the mode zero-mean.
struct TrigMode {
  double amplitude;
  double wavenumber;
  double omega;
  double phase;
};

/// a * exp(-decay t) * sech(k (x - center - speed t))^power.
struct SechTerm {
  double amplitude;
  double k;
  double center;
  double speed;
  double decay;
  int power;
};

/// Closed-form function w(t, x) with exact mixed partials from Taylor jets.
class SmoothProfile {
 public:
  static SmoothProfile trig_sum(std::vector<TrigMode> modes);
  static SmoothProfile sech_family(std::vector<SechTerm> terms);
  /// Solitary wave of a model with an exact solution, unwrapped in x.
  static SmoothProfile traveling_wave(const ExactSolution& wave);
  /// Random zero-mean trigonometric sum with `modes` terms and integer
  /// wavenumbers in 1..max_wavenumber.
  static SmoothProfile random_trig(std::uint64_t seed, int modes = 3, int max_wavenumber = 3);

  ProfileKind kind() const { return kind_; }
  std::string describe() const;

  double value(double t, double x) const;
  /// All partials d^a_t d^b_x with a + b <= order at (t, x).
  Jet jet(int order, double t, double x) const;
  double derivative(int a, int b, double t, double x) const;
  /// Zero-mean x-antiderivative, trig_sum only.
  double antiderivative_x(double t, double x) const;
  /// Upper bound for |w| used to scale tolerances.
  double scale() const;

 private:
  template <class S>
  S eval(const S& t, const S& x) const;

  ProfileKind kind_ = ProfileKind::trig_sum;
  std::vector<TrigMode> modes_;
  std::vector<SechTerm> sech_;
  ExactSolution wave_;
};

/// Worst relative mismatch between the oracle's (a, b) partial and a central
/// difference of its (a-1, b) or (a, b-1) partial, over random points and all
/// 1 <= a + b <= max_order.
double derivative_cross_check(const SmoothProfile& p, int max_order, int points, std::uint64_t seed);

}  // namespace hyperrelax
