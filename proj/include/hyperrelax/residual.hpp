#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hyperrelax/linop.hpp"
#include "hyperrelax/profile.hpp"

namespace hyperrelax {

enum class BarKind { mixed, odd_m, even_m, kawahara, ks };

BarKind parse_bar_kind(const std::string& s);
std::string to_string(BarKind k);

/// One linear term coeff * tau^p * d_t^a d_x^b q_var of a continuous equation.
struct SystemTerm {
  std::size_t var;
  double coeff;
  int tau_power;
  int dt;
  int dx;
};

/// Continuous first-order system written as sum(terms) [+ d_x(q0^2/2)] = 0.
struct SystemEquation {
  std::vector<SystemTerm> terms;
  bool flux = false;
};

struct BarSpec {
  BarKind kind = BarKind::mixed;
  int m = 3;
  int sigma0 = 1;
  double mu = 0.0;
};

/// Lifted approximate solution built from a profile w: every component is a
/// linear differential expression in w with polynomial dependence on tau.
struct BarConstruction {
  BarSpec spec;
  std::vector<SystemEquation> equations;
  std::vector<LinOp> q;
  /// Designated derivative each component reduces to at tau = 0.
  std::vector<LinOp> target;
  /// Linear part of the limit PDE, w_t + ... (flux handled separately).
  LinOp limit_linear;
  /// Equation that carries the flux and reproduces the limit residual.
  std::size_t principal = 0;
  /// Equation that carries tau R.
  std::size_t residual_equation = 0;
  /// Linear part of R; for the principal-equation kinds R also has the flux
  /// part w_x D + w D_x + tau D D_x with D = (q0 - w) / tau.
  LinOp residual_linear;
  bool residual_has_flux = false;
  /// True when residual_linear is the closed form printed for the model rather
  /// than the expression generated by the recipe.
  bool printed_residual = false;
  std::vector<std::string> steps;
};

BarConstruction build_bar_construction(const BarSpec& spec);

class BarState {
 public:
  BarState(BarConstruction c, SmoothProfile profile, double tau);

  const BarConstruction& construction() const { return c_; }
  const SmoothProfile& profile() const { return profile_; }
  double tau() const { return tau_; }
  std::size_t components() const { return c_.q.size(); }
  /// Jet order that covers every expression evaluated at a point.
  int jet_order() const { return order_; }

  double q(std::size_t j, double t, double x) const;
  /// tau R at (t, x).
  double tau_residual(double t, double x) const;

 private:
  BarConstruction c_;
  SmoothProfile profile_;
  double tau_;
  int order_;
};

BarState construct_bar_q(const BarSpec& spec, const SmoothProfile& profile, double tau);

struct EquationCheck {
  std::size_t equation;
  std::string role;  // "auxiliary", "principal", "residual"
  double max_defect;  // absolute, after subtracting the expected value
  double max_scale;   // largest single term seen
};

struct IdentityReport {
  BarSpec spec;
  double tau = 0.0;
  std::vector<EquationCheck> equations;
  double max_aux_relative = 0.0;
  double max_residual_relative = 0.0;
  bool pass = false;
};

/// Evaluates every equation term by term at the sample points. Auxiliary
/// equations must vanish; the principal equation must equal the limit-PDE
/// residual of the profile, and the residual equation additionally tau R.
/// Defects are measured relative to the largest term magnitude.
IdentityReport verify_identities(const BarState& bar, const std::vector<std::pair<double, double>>& points,
                                 double rel_tol = 1e-11);

struct ScalingReport {
  BarSpec spec;
  std::vector<double> taus;
  /// deviation[j][i] = max over points |q_j - target_j| at taus[i].
  std::vector<std::vector<double>> deviation;
  std::vector<double> residual;  // max |tau R| per tau
  /// nullopt marks a component that equals its target identically.
  std::vector<std::optional<double>> slopes;
  std::optional<double> residual_slope;
};

ScalingReport scaling_study(const BarSpec& spec, const SmoothProfile& profile, const std::vector<double>& taus,
                            const std::vector<std::pair<double, double>>& points);

/// Sample points (t, x) with t in [0, 1] and x in [-pi, pi].
std::vector<std::pair<double, double>> random_points(std::size_t count, std::uint64_t seed);

/// CSV rows kind,tau,equation,max_residual.
void write_identity_csv(std::ostream& os, const std::vector<IdentityReport>& reports);

}  // namespace hyperrelax
