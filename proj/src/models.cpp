#include "hyperrelax/models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <fmt/format.h>

#include "hyperrelax/spectral.hpp"

namespace hyperrelax {

namespace {

using enum Diff;

const std::vector<std::string> kNames = {
    "bbm_limit",         "bbm_hyper",        "kdv_limit",          "kdv_hyper",      "kdvb_limit",
    "kdvb_hyper",        "gardner_limit",    "gardner_hyper",      "kawahara_limit", "kawahara_hyper",
    "gen_kawahara_limit", "gen_kawahara_hyper", "biharmonic_limit", "biharmonic_hyper", "ks_limit",
    "ks_hyper",          "odd_m_hyper",      "even_m_hyper"};

std::string family_of(const std::string& name) {
  const auto pos = name.rfind('_');
  return name.substr(0, pos);
}

// Coupling sign of row j in the generic odd/even-m systems.
int coupling_sign(int m, int sigma0, int j) {
  const int alt = (j % 2 == 0) ? 1 : -1;
  if (m % 2 == 0 && j >= m / 2) return -sigma0 * alt;
  return sigma0 * alt;
}

// Derivative attached to row j (acting on q_{m-1-j}); partners j and m-1-j
// carry opposite one-sided operators, a self-paired row uses D0.
Diff generic_operator(int m, int j) {
  const int partner = m - 1 - j;
  if (partner == j) return central;
  const int lead = std::min(j, partner);
  const Diff lead_op = (lead % 2 == 0) ? plus : minus;
  if (j == lead) return lead_op;
  return lead_op == plus ? minus : plus;
}

std::vector<LinearTerm> generic_terms(int m, int sigma0, double tau, double mu) {
  std::vector<LinearTerm> t;
  const auto um = static_cast<std::size_t>(m);
  t.push_back({0, um - 1, -static_cast<double>(sigma0), {generic_operator(m, 0)}});
  for (int j = 1; j < m; ++j) {
    const double s = coupling_sign(m, sigma0, j);
    const auto uj = static_cast<std::size_t>(j);
    t.push_back({uj, um - uj - 1, -s / tau, {generic_operator(m, j)}});
    t.push_back({uj, um - uj, s / tau, {}});
    if (j == 1 && m % 2 == 1 && mu != 0.0) t.push_back({1, 1, -mu / tau, {}});
  }
  return t;
}

Field apply_chain(const OperatorSet& ops, const std::vector<Diff>& chain, const Field& f) {
  if (chain.empty()) return f;
  Field cur = f;
  Field tmp(f.grid);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    ops.get(*it).apply_into(cur.values, tmp.values);
    std::swap(cur.values, tmp.values);
  }
  return cur;
}

Field hadamard(const Field& a, const Field& b) {
  Field out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

Params default_params(const std::string& name) {
  if (!is_model_name(name)) throw DomainError(fmt::format("unknown model '{}'", name));
  Params p;
  const std::string fam = family_of(name);
  if (fam == "kdvb") p.mu = 0.1;
  if (fam == "gen_kawahara") p.sigma = 2.0 / std::sqrt(90.0);
  if (fam == "even_m") {
    p.m = 4;
    p.sigma0 = 1;
  }
  if (fam == "biharmonic" || fam == "ks") p.m = 4;
  if (fam == "kawahara" || fam == "gen_kawahara") p.m = 5;
  return p;
}

const std::vector<std::string>& model_names() { return kNames; }

bool is_model_name(const std::string& name) { return std::find(kNames.begin(), kNames.end(), name) != kNames.end(); }

std::optional<std::string> limit_partner(const std::string& hyper_name) {
  if (!is_model_name(hyper_name)) throw DomainError(fmt::format("unknown model '{}'", hyper_name));
  const std::string fam = family_of(hyper_name);
  if (fam == "odd_m" || fam == "even_m") return std::nullopt;
  return fam + "_limit";
}

Field split_flux(const CirculantOperator& d1, const Field& u, double quad, double cubic) {
  Field out(u.grid);
  if (quad == 0.0 && cubic == 0.0) return out;
  const Field u2 = hadamard(u, u);
  const Field du = d1.apply(u);
  const Field du2 = d1.apply(u2);
  if (quad != 0.0) {
    const double c = quad / 3.0;
    for (std::size_t i = 0; i < u.size(); ++i) out[i] += c * (u[i] * du[i] + du2[i]);
  }
  if (cubic != 0.0) {
    const Field du3 = d1.apply(hadamard(u2, u));
    const double c = cubic / 6.0;
    for (std::size_t i = 0; i < u.size(); ++i) out[i] += c * (u2[i] * du[i] + u[i] * du2[i] + du3[i]);
  }
  return out;
}

ModelSpec make_model(const std::string& name, const Grid& grid, int order, const Params& params) {
  if (!is_model_name(name)) throw DomainError(fmt::format("unknown model '{}'", name));
  const bool limit = name.ends_with("_limit");
  if (!limit && !(params.tau > 0.0)) throw DomainError(fmt::format("{}: tau must be positive", name));
  if (params.mu < 0.0) throw DomainError(fmt::format("{}: mu must be nonnegative", name));
  if (params.sigma0 != 1 && params.sigma0 != -1) throw DomainError("sigma0 must be +1 or -1");

  ModelSpec s;
  s.name_ = name;
  s.params_ = params;
  s.ops_ = std::make_shared<const OperatorSet>(build_upwind_pair(order, grid));
  s.limit_ = limit;
  const std::string fam = family_of(name);
  const double tau = params.tau;
  const double mu = params.mu;

  if (fam == "kdv" || fam == "kdvb" || fam == "gardner") {
    s.quad_ = (fam == "gardner") ? params.sigma : 1.0;
    s.cubic_ = (fam == "gardner") ? 1.0 : 0.0;
    const double mu_eff = (fam == "kdvb") ? mu : 0.0;
    s.params_.m = 3;
    s.params_.sigma0 = 1;
    s.params_.mu = mu_eff;
    if (limit) {
      s.terms_.push_back({0, 0, -1.0, {plus, central, minus}});
      if (mu_eff != 0.0) s.terms_.push_back({0, 0, mu_eff, {plus, minus}});
    } else {
      s.fields_ = 3;
      s.terms_ = generic_terms(3, 1, tau, mu_eff);
    }
  } else if (fam == "kawahara" || fam == "gen_kawahara") {
    s.quad_ = (fam == "gen_kawahara") ? params.sigma : 1.0;
    s.cubic_ = (fam == "gen_kawahara") ? 1.0 : 0.0;
    if (limit) {
      s.terms_.push_back({0, 0, -1.0, {plus, central, minus}});
      s.terms_.push_back({0, 0, 1.0, {plus, plus, central, minus, minus}});
    } else {
      s.fields_ = 5;
      const double it = 1.0 / tau;
      s.terms_ = {
          {0, 4, 1.0, {plus}},
          {1, 1, it, {central}}, {1, 3, -it, {plus}}, {1, 4, it, {}},
          {2, 2, it, {central}}, {2, 3, -it, {}},
          {3, 2, it, {}},        {3, 1, -it, {minus}},
          {4, 0, it, {minus}},   {4, 1, -it, {}},
      };
    }
  } else if (fam == "biharmonic" || fam == "ks") {
    s.quad_ = (fam == "ks") ? 1.0 : 0.0;
    s.params_.m = 4;
    s.params_.sigma0 = 1;
    if (limit) {
      if (fam == "ks") s.terms_.push_back({0, 0, -1.0, {plus, minus}});
      s.terms_.push_back({0, 0, -1.0, {plus, minus, plus, minus}});
    } else {
      s.fields_ = 4;
      s.terms_ = generic_terms(4, 1, tau, 0.0);
      if (fam == "ks") s.terms_.push_back({0, 2, -1.0, {}});
    }
  } else if (fam == "bbm") {
    s.quad_ = 1.0;
    if (limit) {
      s.explicit_only_ = true;
    } else {
      s.fields_ = 3;
      s.terms_ = {
          {0, 2, -1.0, {central}},
          {1, 1, -tau, {central}}, {1, 2, -1.0, {}},
          {2, 1, 1.0 / tau, {}},   {2, 0, -1.0 / tau, {central}},
      };
    }
    const OperatorSet& ops = *s.ops_;
    s.elliptic_ = std::make_shared<const BlockCirculantSolver>(grid.size(), 1, [&ops](double theta) {
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = 1.0 - ops.dplus.symbol(theta) * ops.dminus.symbol(theta);
      return m;
    });
  } else if (fam == "odd_m" || fam == "even_m") {
    const int m = params.m;
    if (fam == "odd_m" && (m < 1 || m % 2 == 0)) throw DomainError("odd_m_hyper requires odd m >= 1");
    if (fam == "even_m") {
      if (m < 2 || m % 2 == 1) throw DomainError("even_m_hyper requires even m >= 2");
      const int required = (m / 2) % 2 == 0 ? 1 : -1;
      if (params.sigma0 != required) throw DomainError(fmt::format("even m = {} requires sigma0 = {}", m, required));
      if (mu != 0.0) throw DomainError("even_m_hyper has no dissipation parameter");
    }
    s.quad_ = 1.0;
    s.fields_ = static_cast<std::size_t>(m);
    s.terms_ = generic_terms(m, params.sigma0, tau, fam == "odd_m" ? mu : 0.0);
  }

  s.weights_.assign(s.fields_, tau);
  s.weights_[0] = 1.0;
  if (name == "bbm_hyper") s.weights_ = {1.0, 1.0, tau};

  if (fam == "gardner") {
    const double c = 1.2;
    const double sig = s.quad_;
    const double r = std::sqrt(sig * sig + 6.0 * c);
    s.exact_ = {ExactKind::gardner, c, 3.0 * c / r, 0.5 * (sig / r - 1.0), std::sqrt(c) / 2.0};
  } else if (fam == "kawahara") {
    s.exact_ = {ExactKind::kawahara, 36.0 / 169.0, 0.0, 0.0, 0.0};
  } else if (fam == "gen_kawahara") {
    const double sig = s.quad_;
    const double k2 = 1.0 / 20.0 + sig / (4.0 * std::sqrt(10.0));
    s.exact_ = {ExactKind::gen_kawahara, 4.0 * k2 * (1.0 - 4.0 * k2), -6.0 * std::sqrt(10.0) * k2, 0.0,
                std::sqrt(k2)};
  } else if (fam == "biharmonic") {
    s.exact_ = {ExactKind::biharmonic, 0.0, 0.0, 0.0, 0.0};
  }
  return s;
}

void ModelSpec::check_state(const State& q, const char* where) const {
  if (q.components() != fields_)
    throw DomainError(fmt::format("{}({}): expected {} fields, got {}", where, name_, fields_, q.components()));
  require_same_grid(grid(), q.grid(), where);
  if (!q.all_finite()) throw DomainError(fmt::format("{}({}): non-finite state", where, name_));
}

State ModelSpec::rhs_explicit(const State& q) const {
  check_state(q, "rhs_explicit");
  State out = zero_state();
  Field flux = split_flux(ops_->dcentral, q[0], quad_, cubic_);
  if (explicit_only_) flux = bbm_elliptic_solve(flux);
  for (std::size_t i = 0; i < flux.size(); ++i) out[0][i] = -flux[i];
  return out;
}

State ModelSpec::rhs_implicit(const State& q) const {
  check_state(q, "rhs_implicit");
  State out = zero_state();
  for (const LinearTerm& t : terms_) {
    const Field d = apply_chain(*ops_, t.chain, q[t.col]);
    Field& o = out[t.row];
    for (std::size_t i = 0; i < d.size(); ++i) o[i] += t.coeff * d[i];
  }
  return out;
}

State ModelSpec::rhs(const State& q) const { return rhs_explicit(q) + rhs_implicit(q); }

Eigen::MatrixXcd ModelSpec::implicit_symbol(double theta) const {
  const auto m = static_cast<Eigen::Index>(fields_);
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(m, m);
  for (const LinearTerm& t : terms_) {
    std::complex<double> s = t.coeff;
    for (Diff d : t.chain) s *= ops_->get(d).symbol(theta);
    L(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += s;
  }
  return L;
}

Eigen::MatrixXd ModelSpec::implicit_dense() const {
  const std::size_t n = grid().size();
  const auto N = static_cast<Eigen::Index>(n * fields_);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  State e = zero_state();
  for (std::size_t c = 0; c < fields_; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      e[c][i] = 1.0;
      const State col = rhs_implicit(e);
      e[c][i] = 0.0;
      for (std::size_t r = 0; r < fields_; ++r)
        for (std::size_t k = 0; k < n; ++k)
          A(static_cast<Eigen::Index>(r * n + k), static_cast<Eigen::Index>(c * n + i)) = col[r][k];
    }
  }
  return A;
}

Field ModelSpec::bbm_elliptic_solve(const Field& f) const {
  if (!elliptic_) throw DomainError(fmt::format("{}: no elliptic operator", name_));
  require_same_grid(grid(), f.grid, "bbm_elliptic_solve");
  Field out(f.grid);
  const std::span<const double> in[] = {f.values};
  const std::span<double> res[] = {out.values};
  elliptic_->solve(in, res);
  return out;
}

double ModelSpec::traversal_time() const {
  if (exact_.speed == 0.0) throw DomainError(fmt::format("{}: no travelling wave", name_));
  return grid().length() / std::abs(exact_.speed);
}

State init_hyperbolic(const ModelSpec& model, const Field& u0) {
  require_same_grid(model.grid(), u0.grid, "init_hyperbolic");
  const std::string fam = family_of(model.name());
  if ((fam == "kdv" || fam == "kdvb" || fam == "gardner") && !model.is_limit() &&
      model.params().kdv_init == KdvInit::printed) {
    const OperatorSet& ops = model.operators();
    State q = model.zero_state();
    q[0] = u0;
    q[1] = ops.dminus.apply(u0) - model.params().mu * u0;
    q[2] = ops.dcentral.apply(q[1]);
    return q;
  }
  return equilibrium_pattern(model, u0);
}

State equilibrium_pattern(const ModelSpec& model, const Field& u) {
  require_same_grid(model.grid(), u.grid, "equilibrium_pattern");
  const OperatorSet& ops = model.operators();
  const std::string fam = family_of(model.name());
  State q = model.zero_state();
  q[0] = u;
  if (model.is_limit()) return q;
  if (fam == "bbm") {
    q[1] = ops.dcentral.apply(u);
    Field rate = model.bbm_elliptic_solve(split_flux(ops.dcentral, u, 1.0, 0.0));
    rate *= -1.0;
    q[2] = -1.0 * ops.dcentral.apply(rate);
    return q;
  }
  if (fam == "kawahara" || fam == "gen_kawahara") {
    q[1] = ops.dminus.apply(q[0]);
    q[2] = ops.dminus.apply(q[1]);
    q[3] = ops.dcentral.apply(q[2]);
    q[4] = ops.dplus.apply(q[3]) - ops.dcentral.apply(q[1]);
    return q;
  }
  // Generic pattern: row m-k at rest gives q_k = A_{m-k} q_{k-1}.
  const int m = static_cast<int>(model.field_count());
  for (int k = 1; k < m; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    q[uk] = ops.get(generic_operator(m, m - k)).apply(q[uk - 1]);
  }
  if (m % 2 == 1 && m >= 3 && model.params().mu != 0.0) {
    const double s1 = coupling_sign(m, model.params().sigma0, 1);
    const auto last = static_cast<std::size_t>(m - 1);
    q[last] += (model.params().mu / s1) * q[1];
  }
  return q;
}

double energy(const ModelSpec& model, const State& q) {
  double e = 0.5 * weighted_inner(q, q, model.energy_weights());
  if (model.name() == "bbm_limit") {
    const Field d = model.operators().dminus.apply(q[0]);
    e += 0.5 * l2_inner(d, d);
  }
  return e;
}

double energy_rate(const ModelSpec& model, const State& q) {
  const State r = model.rhs(q);
  double rate = weighted_inner(q, r, model.energy_weights());
  if (model.name() == "bbm_limit") {
    const auto& dm = model.operators().dminus;
    rate += l2_inner(dm.apply(q[0]), dm.apply(r[0]));
  }
  return rate;
}

double expected_energy_rate(const ModelSpec& model, const State& q) {
  const std::string& n = model.name();
  const OperatorSet& ops = model.operators();
  if (n == "kdvb_hyper") return -model.params().mu * l2_inner(q[1], q[1]);
  if (n == "odd_m_hyper" && model.params().m >= 3) return -model.params().mu * l2_inner(q[1], q[1]);
  if (n == "biharmonic_hyper") return -l2_inner(q[2], q[2]);
  if (n == "even_m_hyper") {
    const Field& c = q[static_cast<std::size_t>(model.params().m / 2)];
    return -l2_inner(c, c);
  }
  if (n == "ks_hyper") return -l2_inner(q[0], q[2]) - l2_inner(q[2], q[2]);
  if (n == "kdvb_limit") {
    const Field d = ops.dminus.apply(q[0]);
    return -model.params().mu * l2_inner(d, d);
  }
  if (n == "biharmonic_limit" || n == "ks_limit") {
    const Field d = ops.dminus.apply(q[0]);
    const Field dd = ops.dplus.apply(d);
    double r = -l2_inner(dd, dd);
    if (n == "ks_limit") r += l2_inner(d, d);
    return r;
  }
  return 0.0;
}

Eigen::MatrixXd flux_jacobian(const ModelSpec& model, double q0) {
  const std::string fam = family_of(model.name());
  if (model.is_limit()) throw DomainError(fmt::format("{}: limit models have no flux Jacobian", model.name()));
  const double tau = model.params().tau;
  const double it = 1.0 / tau;
  const auto m = static_cast<Eigen::Index>(model.field_count());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  // q0 rows carry f'(q0) of the principal flux.
  const double fprime = model.quadratic_flux() * q0 + model.cubic_flux() * q0 * q0;
  A(0, 0) = fprime;
  if (fam == "bbm") {
    A(0, 2) = 1.0;
    A(1, 1) = tau;
    A(2, 0) = it;
  } else if (fam == "kawahara" || fam == "gen_kawahara") {
    A(0, 4) = -1.0;
    A(1, 1) = -it;
    A(1, 3) = it;
    A(2, 2) = -it;
    A(3, 1) = it;
    A(4, 0) = -it;
  } else {
    // Generic rows: q_j,t + (s_j / tau) q_{m-1-j},x = ..., row 0 with sigma0.
    const int mm = static_cast<int>(m);
    A(0, m - 1) = model.params().sigma0;
    for (int j = 1; j < mm; ++j) A(j, mm - 1 - j) = coupling_sign(mm, model.params().sigma0, j) * it;
  }
  return A;
}

std::vector<double> jacobian_eigenvalues(const ModelSpec& model, double q0) {
  const std::string fam = family_of(model.name());
  const double tau = model.params().tau;
  if (model.is_limit() || !(fam == "kawahara" || fam == "gen_kawahara" || fam == "ks" || fam == "bbm"))
    throw DomainError(fmt::format("{}: no closed-form eigenvalues", model.name()));
  const double fp = model.quadratic_flux() * q0 + model.cubic_flux() * q0 * q0;
  const double disc = std::sqrt(fp * fp + 4.0 / tau);
  const double s5 = std::sqrt(5.0);
  if (fam == "bbm") return {tau, 0.5 * (fp - disc), 0.5 * (fp + disc)};
  if (fam == "ks") return {-1.0 / tau, 1.0 / tau, 0.5 * (fp - disc), 0.5 * (fp + disc)};
  return {-(1.0 + s5) / (2.0 * tau), -1.0 / tau, (s5 - 1.0) / (2.0 * tau), 0.5 * (fp - disc), 0.5 * (fp + disc)};
}

double exact_solution(const ModelSpec& model, double t, double x) {
  if (!model.has_exact_solution()) throw DomainError(fmt::format("{}: no exact solution", model.name()));
  return exact_solution_value(model.exact(), &model.grid(), t, x);
}

Field exact_solution_field(const ModelSpec& model, double t) {
  return Field::sample(model.grid(), [&](double x) { return exact_solution(model, t, x); });
}

}  // namespace hyperrelax
