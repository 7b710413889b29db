#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperrelax/grid.hpp"
#include "hyperrelax/models.hpp"
#include "hyperrelax/relaxation.hpp"

namespace hyperrelax {

class BlockCirculantSolver;

/// Non-finite state or failed stage solve during time integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IMEXTableau {
  std::string name;
  Eigen::MatrixXd a_exp;
  Eigen::VectorXd b_exp;
  Eigen::MatrixXd a_imp;
  Eigen::VectorXd b_imp;
  Eigen::VectorXd c_exp;
  Eigen::VectorXd c_imp;

  int stages() const { return static_cast<int>(b_exp.size()); }
  /// b equals the last row of a for both tableaus, so y_{n+1} is the last stage.
  bool stiffly_accurate() const;
};

/// Largest defect over the additive order conditions up to `order` (at most 3),
/// including all explicit/implicit coupling conditions and row-sum consistency.
double order_condition_defect(const IMEXTableau& tab, int order);

/// ARS(4,4,3) with its explicit first stage (five stages). Order conditions
/// are checked on construction.
const IMEXTableau& ars443();

/// Stability function of the implicit tableau, R(z) = 1 + z b^T (I - zA)^{-1} 1.
std::complex<double> implicit_stability(const IMEXTableau& tab, std::complex<double> z);

enum class StepMode { imex, explicit_only };

struct StepperConfig {
  double dt = 0.1;
  StepMode mode = StepMode::imex;
  double stage_tol = 1e-8;
};

/// A right-hand side split into an explicit and a linear implicit part.
class SplitProblem {
 public:
  virtual ~SplitProblem() = default;
  virtual State explicit_rate(const State& q) const = 0;
  virtual State implicit_rate(const State& q) const = 0;
  /// Solves z - c * implicit_rate(z) = rhs.
  virtual State solve_stage(double c, const State& rhs) const = 0;
};

enum class StageSolverKind { spectral, dense };

/// SplitProblem view of a ModelSpec. Stage factorizations are cached per
/// dt * a_ii; one instance belongs to one run.
class ModelProblem : public SplitProblem {
 public:
  explicit ModelProblem(const ModelSpec& model, StageSolverKind kind = StageSolverKind::spectral);
  ~ModelProblem() override;

  const ModelSpec& model() const { return model_; }
  State explicit_rate(const State& q) const override { return model_.rhs_explicit(q); }
  State implicit_rate(const State& q) const override { return model_.rhs_implicit(q); }
  State solve_stage(double c, const State& rhs) const override;

 private:
  const ModelSpec& model_;
  StageSolverKind kind_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::shared_ptr<const BlockCirculantSolver>> spectral_;
  mutable std::map<double, std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>>> dense_;
};

/// Direct solve of z - dt a_ii rhs_implicit(z) = rhs with a residual check
/// against stage_tol.
State solve_stage(const ModelSpec& model, double a_ii, double dt, const State& rhs, double stage_tol = 1e-8,
                  StageSolverKind kind = StageSolverKind::spectral);

/// One additive Runge-Kutta step of size cfg.dt. In explicit_only mode the
/// implicit rate is added to the explicit one and the explicit tableau is used.
State imex_step(const SplitProblem& problem, const State& q, const StepperConfig& cfg,
                const IMEXTableau& tab = ars443());

/// Per-step callback: time, accepted state, relaxation factor.
using Observer = std::function<void(double t, const State& q, double gamma)>;

struct IntegrateOptions {
  RelaxationConfig relaxation;
  std::vector<Observer> observers;
  /// Diagnostics row every `record_every` accepted steps (plus first and last);
  /// 0 records only the endpoints.
  std::size_t record_every = 1;
  StageSolverKind solver = StageSolverKind::spectral;
};

/// Diagnostics of a run: t, mass, energy, per-field L2 norms and, for relaxed
/// runs, gamma and the invariant.
struct TimeSeries {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::optional<State> final_state;
  double final_time = 0.0;
  std::size_t steps = 0;

  void write_csv(std::ostream& os) const;
};

TimeSeries integrate(const ModelSpec& model, const State& q0, double T, const StepperConfig& cfg,
                     const IntegrateOptions& opts = {});

/// Snapshot CSV with columns x, q0, ..., q_{m-1}.
void write_state_csv(std::ostream& os, const State& q);

}  // namespace hyperrelax
