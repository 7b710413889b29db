#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperrelax/grid.hpp"
#include "hyperrelax/sbp.hpp"

namespace hyperrelax {

class BlockCirculantSolver;

/// How the kdv-family auxiliaries are seeded. `printed` uses
/// (q0, D-q0 - mu q0, D0 q1); `equilibrium` uses the rest state of the
/// stiff blocks, (q0, D-q0, D0 q1 - mu q1). Both agree for mu = 0.
enum class KdvInit { printed, equilibrium };

struct Params {
  double tau = 1e-3;
  double mu = 0.0;
  double sigma = 1.0;
  int sigma0 = 1;
  int m = 3;
  KdvInit kdv_init = KdvInit::printed;
};

/// Model-specific defaults (sigma for gardner/gen_kawahara, m and sigma0 for
/// the generic systems, mu for kdvb).
Params default_params(const std::string& name);

/// Contribution coeff * D[chain[0]] D[chain[1]] ... q[col] to the rate of
/// component `row`; the last operator of the chain acts first.
struct LinearTerm {
  std::size_t row;
  std::size_t col;
  double coeff;
  std::vector<Diff> chain;
};

enum class ExactKind { none, gardner, kawahara, gen_kawahara, biharmonic };

struct ExactSolution {
  ExactKind kind = ExactKind::none;
  double speed = 0.0;
  // Shape constants: gardner (A1, A2, sqrt(c)/2); gen_kawahara (amplitude, k).
  double a = 0.0;
  double b = 0.0;
  double k = 0.0;
};

class ModelSpec {
 public:
  const std::string& name() const { return name_; }
  const Params& params() const { return params_; }
  std::size_t field_count() const { return fields_; }
  const OperatorSet& operators() const { return *ops_; }
  const Grid& grid() const { return ops_->grid(); }
  const std::vector<double>& energy_weights() const { return weights_; }
  bool is_limit() const { return limit_; }
  /// True when the whole right-hand side is evaluated explicitly (bbm_limit).
  bool explicit_only() const { return explicit_only_; }
  const std::vector<LinearTerm>& implicit_terms() const { return terms_; }
  double quadratic_flux() const { return quad_; }
  double cubic_flux() const { return cubic_; }

  State zero_state() const { return State(grid(), fields_); }

  State rhs_explicit(const State& q) const;
  State rhs_implicit(const State& q) const;
  State rhs(const State& q) const;

  /// Fourier symbol of rhs_implicit: an m x m matrix per mode angle theta.
  Eigen::MatrixXcd implicit_symbol(double theta) const;
  /// rhs_implicit as a dense (m n) x (m n) matrix, components stacked.
  Eigen::MatrixXd implicit_dense() const;

  /// (I - D+D-)^{-1} applied to f; only available for the bbm models.
  Field bbm_elliptic_solve(const Field& f) const;

  const ExactSolution& exact() const { return exact_; }
  bool has_exact_solution() const { return exact_.kind != ExactKind::none; }
  /// Time for the exact wave to cross the domain once; throws if it does not move.
  double traversal_time() const;

 private:
  friend ModelSpec make_model(const std::string&, const Grid&, int, const Params&);
  ModelSpec() = default;
  void check_state(const State& q, const char* where) const;

  std::string name_;
  Params params_;
  std::size_t fields_ = 1;
  std::shared_ptr<const OperatorSet> ops_;
  std::vector<double> weights_;
  bool limit_ = true;
  bool explicit_only_ = false;
  std::vector<LinearTerm> terms_;
  double quad_ = 0.0;
  double cubic_ = 0.0;
  std::shared_ptr<const BlockCirculantSolver> elliptic_;
  ExactSolution exact_;
};

/// Registered model names, in registry order.
const std::vector<std::string>& model_names();
bool is_model_name(const std::string& name);
/// Limit model matching a hyperbolization (kdv_hyper -> kdv_limit); nullopt
/// for the generic systems.
std::optional<std::string> limit_partner(const std::string& hyper_name);

ModelSpec make_model(const std::string& name, const Grid& grid, int order, const Params& params);
inline ModelSpec make_model(const std::string& name, const Grid& grid, int order) {
  return make_model(name, grid, order, default_params(name));
}

/// Split-form nonlinear flux: quad (1/3)(u D1 u + D1 u^2) + cubic (1/6)(u^2 D1 u + u D1 u^2 + D1 u^3).
Field split_flux(const CirculantOperator& d1, const Field& u, double quad, double cubic);

State init_hyperbolic(const ModelSpec& model, const Field& u0);
/// Auxiliary pattern used as the error reference for a limit solution u:
/// the rest state of the stiff blocks expressed through u.
State equilibrium_pattern(const ModelSpec& model, const Field& u);

double energy(const ModelSpec& model, const State& q);
double energy_rate(const ModelSpec& model, const State& q);
/// Closed-form energy production: 0 for conservative models,
/// -mu |q1|^2 (kdvb), -<q0,q2> - |q2|^2 (ks), -|q_{m/2}|^2 (even m) and the
/// matching limit-model expressions.
double expected_energy_rate(const ModelSpec& model, const State& q);

/// Flux Jacobian A of the continuous first-order system q_t + A q_x = S q at
/// the state value q0 (auxiliaries do not enter).
Eigen::MatrixXd flux_jacobian(const ModelSpec& model, double q0_value);
std::vector<double> jacobian_eigenvalues(const ModelSpec& model, double q0_value);

/// Closed form at (t, x); with a grid the travelling coordinate is wrapped
/// into the periodic domain, without one it is left unbounded.
template <class S>
S exact_solution_value(const ExactSolution& ex, const Grid* grid, const S& t, const S& x);

double exact_solution(const ModelSpec& model, double t, double x);
Field exact_solution_field(const ModelSpec& model, double t);

// ---------------------------------------------------------------------------

namespace detail {
inline double scalar_value(double v) { return v; }
template <class S>
double scalar_value(const S& v) {
  return v.value();
}
}  // namespace detail

template <class S>
S exact_solution_value(const ExactSolution& ex, const Grid* grid, const S& t, const S& x) {
  using std::cosh;
  using std::exp;
  using std::sin;
  S xi = x - ex.speed * t;
  if (grid) {
    const double raw = detail::scalar_value(xi);
    xi = xi + (grid->wrap(raw) - raw);
  }
  switch (ex.kind) {
    case ExactKind::gardner: {
      const S ch = cosh(ex.k * xi);
      return ex.a / (ex.b + ch * ch);
    }
    case ExactKind::kawahara: {
      const S ch = cosh(xi / (2.0 * std::sqrt(13.0)));
      const S sech2 = 1.0 / (ch * ch);
      return (105.0 / 169.0) * sech2 * sech2;
    }
    case ExactKind::gen_kawahara: {
      const S ch = cosh(ex.k * xi);
      return ex.a / (ch * ch);
    }
    case ExactKind::biharmonic:
      return exp(-1.0 * t) * sin(x);
    case ExactKind::none:
      break;
  }
  throw DomainError("model has no exact solution");
}

}  // namespace hyperrelax
