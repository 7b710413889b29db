#include "hyperrelax/imex.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hyperrelax/spectral.hpp"

namespace hyperrelax {

bool IMEXTableau::stiffly_accurate() const {
  const int s = stages();
  for (int j = 0; j < s; ++j) {
    if (a_imp(s - 1, j) != b_imp(j)) return false;
    if (a_exp(s - 1, j) != b_exp(j)) return false;
  }
  return true;
}

double order_condition_defect(const IMEXTableau& tab, int order) {
  if (order < 1 || order > 3) throw DomainError("order conditions are implemented up to order 3");
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(tab.stages());
  const Eigen::MatrixXd* A[2] = {&tab.a_exp, &tab.a_imp};
  const Eigen::VectorXd* b[2] = {&tab.b_exp, &tab.b_imp};
  const Eigen::VectorXd* c[2] = {&tab.c_exp, &tab.c_imp};
  double defect = 0.0;
  for (int p = 0; p < 2; ++p) {
    defect = std::max(defect, ((*A[p]) * one - *c[p]).cwiseAbs().maxCoeff());
    defect = std::max(defect, std::abs(b[p]->sum() - 1.0));
  }
  if (order < 2) return defect;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) defect = std::max(defect, std::abs(b[p]->dot(*c[q]) - 0.5));
  if (order < 3) return defect;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r) {
        defect = std::max(defect, std::abs(b[p]->dot(c[q]->cwiseProduct(*c[r])) - 1.0 / 3.0));
        defect = std::max(defect, std::abs(b[p]->dot((*A[q]) * (*c[r])) - 1.0 / 6.0));
      }
  return defect;
}

namespace {

IMEXTableau build_ars443() {
  IMEXTableau t;
  t.name = "ARS(4,4,3)";
  t.a_imp = Eigen::MatrixXd::Zero(5, 5);
  t.a_imp << 0, 0, 0, 0, 0,
             0, 1.0 / 2, 0, 0, 0,
             0, 1.0 / 6, 1.0 / 2, 0, 0,
             0, -1.0 / 2, 1.0 / 2, 1.0 / 2, 0,
             0, 3.0 / 2, -3.0 / 2, 1.0 / 2, 1.0 / 2;
  t.a_exp = Eigen::MatrixXd::Zero(5, 5);
  t.a_exp << 0, 0, 0, 0, 0,
             1.0 / 2, 0, 0, 0, 0,
             11.0 / 18, 1.0 / 18, 0, 0, 0,
             5.0 / 6, -5.0 / 6, 1.0 / 2, 0, 0,
             1.0 / 4, 7.0 / 4, 3.0 / 4, -7.0 / 4, 0;
  t.b_imp = t.a_imp.row(4).transpose();
  t.b_exp = t.a_exp.row(4).transpose();
  t.c_imp = t.a_imp.rowwise().sum();
  t.c_exp = t.a_exp.rowwise().sum();
  const double defect = order_condition_defect(t, 3);
  if (defect > 1e-14) throw std::logic_error(fmt::format("ARS(4,4,3) order conditions violated ({:.3g})", defect));
  return t;
}

}  // namespace

const IMEXTableau& ars443() {
  static const IMEXTableau tab = build_ars443();
  return tab;
}

std::complex<double> implicit_stability(const IMEXTableau& tab, std::complex<double> z) {
  // Stage values Y = 1 + z A Y by forward substitution (A is lower triangular).
  const int s = tab.stages();
  std::vector<std::complex<double>> y(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    std::complex<double> acc = 1.0;
    for (int j = 0; j < i; ++j) acc += z * tab.a_imp(i, j) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc / (1.0 - z * tab.a_imp(i, i));
  }
  std::complex<double> r = 1.0;
  for (int j = 0; j < s; ++j) r += z * tab.b_imp(j) * y[static_cast<std::size_t>(j)];
  if (tab.stiffly_accurate()) r = y.back();
  return r;
}

ModelProblem::ModelProblem(const ModelSpec& model, StageSolverKind kind) : model_(model), kind_(kind) {}

ModelProblem::~ModelProblem() = default;

State ModelProblem::solve_stage(double c, const State& rhs) const {
  if (c == 0.0 || model_.implicit_terms().empty()) return rhs;
  const std::size_t m = model_.field_count();
  const std::size_t n = model_.grid().size();
  State z = model_.zero_state();
  try {
    if (kind_ == StageSolverKind::spectral) {
      std::shared_ptr<const BlockCirculantSolver> solver;
      {
        std::lock_guard lock(mutex_);
        auto it = spectral_.find(c);
        if (it == spectral_.end()) {
          const ModelSpec& mod = model_;
          auto fn = [&mod, c, m](double theta) -> Eigen::MatrixXcd {
            const auto mm = static_cast<Eigen::Index>(m);
            return Eigen::MatrixXcd::Identity(mm, mm) - c * mod.implicit_symbol(theta);
          };
          it = spectral_.emplace(c, std::make_shared<const BlockCirculantSolver>(n, m, fn)).first;
        }
        solver = it->second;
      }
      std::vector<std::span<const double>> in;
      std::vector<std::span<double>> out;
      for (std::size_t j = 0; j < m; ++j) {
        in.emplace_back(rhs[j].values);
        out.emplace_back(z[j].values);
      }
      solver->solve(in, out);
    } else {
      std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
      {
        std::lock_guard lock(mutex_);
        auto it = dense_.find(c);
        if (it == dense_.end()) {
          const Eigen::MatrixXd L = model_.implicit_dense();
          const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(L.rows(), L.cols()) - c * L;
          auto f = std::make_shared<const Eigen::PartialPivLU<Eigen::MatrixXd>>(M);
          if (!(std::abs(f->determinant()) > 0.0)) throw std::runtime_error("singular dense stage matrix");
          it = dense_.emplace(c, std::move(f)).first;
        }
        lu = it->second;
      }
      Eigen::VectorXd r(static_cast<Eigen::Index>(m * n));
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) r(static_cast<Eigen::Index>(j * n + i)) = rhs[j][i];
      const Eigen::VectorXd x = lu->solve(r);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) z[j][i] = x(static_cast<Eigen::Index>(j * n + i));
    }
  } catch (const std::runtime_error& e) {
    throw NumericalError(fmt::format("stage solve failed for {} with dt*a_ii = {:.6g}: {}", model_.name(), c, e.what()));
  }
  return z;
}

namespace {

double state_norm(const State& q) {
  double s = 0.0;
  for (const Field& f : q) s += l2_inner(f, f);
  return std::sqrt(s);
}

}  // namespace

State solve_stage(const ModelSpec& model, double a_ii, double dt, const State& rhs, double stage_tol,
                  StageSolverKind kind) {
  const ModelProblem problem(model, kind);
  const double c = dt * a_ii;
  State z = problem.solve_stage(c, rhs);
  State res = z;
  res.axpy(-c, model.rhs_implicit(z));
  res = res - rhs;
  const double scale = state_norm(rhs);
  if (state_norm(res) > stage_tol * std::max(scale, 1e-300) && scale > 0.0)
    throw NumericalError(fmt::format("stage residual {:.3g} exceeds tolerance for {} (dt*a_ii = {:.6g})",
                                     state_norm(res) / scale, model.name(), c));
  return z;
}

namespace {

void require_finite_stage(const State& stage, int i) {
  if (!stage.all_finite()) throw NumericalError(fmt::format("non-finite value in stage {}", i + 1));
}

}  // namespace

State imex_step(const SplitProblem& problem, const State& q, const StepperConfig& cfg, const IMEXTableau& tab) {
  const int s = tab.stages();
  const double dt = cfg.dt;
  std::vector<State> ke, ki;
  ke.reserve(static_cast<std::size_t>(s));
  ki.reserve(static_cast<std::size_t>(s));
  State stage = q;
  if (cfg.mode == StepMode::explicit_only) {
    for (int i = 0; i < s; ++i) {
      stage = q;
      for (int j = 0; j < i; ++j)
        if (tab.a_exp(i, j) != 0.0) stage.axpy(dt * tab.a_exp(i, j), ke[static_cast<std::size_t>(j)]);
      require_finite_stage(stage, i);
      ke.push_back(problem.explicit_rate(stage) + problem.implicit_rate(stage));
    }
    State out = q;
    for (int j = 0; j < s; ++j)
      if (tab.b_exp(j) != 0.0) out.axpy(dt * tab.b_exp(j), ke[static_cast<std::size_t>(j)]);
    return out;
  }
  for (int i = 0; i < s; ++i) {
    State rhs = q;
    for (int j = 0; j < i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (tab.a_exp(i, j) != 0.0) rhs.axpy(dt * tab.a_exp(i, j), ke[uj]);
      if (tab.a_imp(i, j) != 0.0) rhs.axpy(dt * tab.a_imp(i, j), ki[uj]);
    }
    stage = problem.solve_stage(dt * tab.a_imp(i, i), rhs);
    require_finite_stage(stage, i);
    ke.push_back(problem.explicit_rate(stage));
    ki.push_back(problem.implicit_rate(stage));
  }
  if (tab.stiffly_accurate()) return stage;
  State out = q;
  for (int j = 0; j < s; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if (tab.b_exp(j) != 0.0) out.axpy(dt * tab.b_exp(j), ke[uj]);
    if (tab.b_imp(j) != 0.0) out.axpy(dt * tab.b_imp(j), ki[uj]);
  }
  return out;
}

void TimeSeries::write_csv(std::ostream& os) const {
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << fmt::format("{:.17g}", r[c]);
    os << '\n';
  }
}

namespace {

std::vector<double> diagnostics(const ModelSpec& model, const State& q, double t, bool relaxed, double gamma,
                                const RelaxationConfig& rc) {
  std::vector<double> row{t, mass(q[0]), energy(model, q)};
  for (const Field& f : q) row.push_back(l2_norm(f));
  if (relaxed) {
    row.push_back(gamma);
    row.push_back(quadratic_invariant(q, rc.weights));
  }
  return row;
}

}  // namespace

TimeSeries integrate(const ModelSpec& model, const State& q0, double T, const StepperConfig& cfg,
                     const IntegrateOptions& opts) {
  if (!(T > 0.0)) throw DomainError("integrate: final time must be positive");
  if (!(cfg.dt > 0.0)) throw DomainError("integrate: dt must be positive");
  if (q0.components() != model.field_count()) throw DomainError("integrate: state does not match model");
  StepperConfig step_cfg = cfg;
  if (model.explicit_only()) step_cfg.mode = StepMode::explicit_only;
  const bool relaxed = opts.relaxation.enabled;
  RelaxationConfig rc = opts.relaxation;
  if (relaxed && rc.weights.empty()) rc.weights = model.energy_weights();

  const ModelProblem problem(model, opts.solver);
  TimeSeries ts;
  ts.columns = {"t", "mass", "energy"};
  for (std::size_t j = 0; j < model.field_count(); ++j) ts.columns.push_back(fmt::format("l2_q{}", j));
  if (relaxed) {
    ts.columns.emplace_back("gamma");
    ts.columns.emplace_back("invariant");
  }
  State q = q0;
  double t = 0.0;
  ts.rows.push_back(diagnostics(model, q, t, relaxed, 1.0, rc));
  const double tol = 1e-12 * std::max(1.0, T);
  std::size_t step = 0;
  double gamma = 1.0;
  while (T - t > tol) {
    double h = std::min(cfg.dt, T - t);
    step_cfg.dt = h;
    State next = imex_step(problem, q, step_cfg);
    double t_next = t + h;
    gamma = 1.0;
    if (relaxed) {
      RelaxedStep r = relaxed_update(q, next, t, h, rc);
      if (rc.landing == LandingPolicy::land_on_t) {
        // Rescale the step until the relaxed time lands on T.
        for (int it = 0; it < 8 && r.time > T + tol; ++it) {
          h = (T - t) / r.gamma;
          step_cfg.dt = h;
          next = imex_step(problem, q, step_cfg);
          r = relaxed_update(q, next, t, h, rc);
        }
        if (std::abs(r.time - T) <= tol) r.time = T;
      }
      next = std::move(r.state);
      t_next = r.time;
      gamma = r.gamma;
    } else if (T - t_next <= tol) {
      t_next = T;
    }
    if (!next.all_finite()) throw NumericalError(fmt::format("{}: non-finite state at t = {:.6g}", model.name(), t_next));
    q = std::move(next);
    t = t_next;
    ++step;
    for (const Observer& ob : opts.observers) ob(t, q, gamma);
    const bool last = !(T - t > tol);
    if (last || (opts.record_every > 0 && step % opts.record_every == 0))
      ts.rows.push_back(diagnostics(model, q, t, relaxed, gamma, rc));
  }
  ts.final_state = std::move(q);
  ts.final_time = t;
  ts.steps = step;
  return ts;
}

void write_state_csv(std::ostream& os, const State& q) {
  os << "x";
  for (std::size_t j = 0; j < q.components(); ++j) os << ",q" << j;
  os << '\n';
  for (std::size_t i = 0; i < q.grid().size(); ++i) {
    os << fmt::format("{:.17g}", q.grid().node(i));
    for (const Field& f : q) os << fmt::format(",{:.17g}", f[i]);
    os << '\n';
  }
}

}  // namespace hyperrelax
