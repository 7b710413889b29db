#include "hyperrelax/residual.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "hyperrelax/fit.hpp"
#include "hyperrelax/grid.hpp"

namespace hyperrelax {

BarKind parse_bar_kind(const std::string& s) {
  if (s == "mixed") return BarKind::mixed;
  if (s == "odd_m") return BarKind::odd_m;
  if (s == "even_m") return BarKind::even_m;
  if (s == "kawahara") return BarKind::kawahara;
  if (s == "ks") return BarKind::ks;
  throw DomainError(fmt::format("unknown residual kind '{}'", s));
}

std::string to_string(BarKind k) {
  switch (k) {
    case BarKind::mixed: return "mixed";
    case BarKind::odd_m: return "odd_m";
    case BarKind::even_m: return "even_m";
    case BarKind::kawahara: return "kawahara";
    case BarKind::ks: return "ks";
  }
  return "unknown";
}

namespace {

LinOp dx_power(int b) { return LinOp::term(1.0, 0, 0, b); }

std::string label(const BarSpec& s) {
  if (s.kind == BarKind::odd_m || s.kind == BarKind::even_m) return fmt::format("{}{}", to_string(s.kind), s.m);
  return to_string(s.kind);
}

int generic_sign(const BarSpec& s, int j) {
  const int alt = (j % 2 == 0) ? 1 : -1;
  if (s.kind == BarKind::even_m && 2 * j >= s.m) return -s.sigma0 * alt;
  return s.sigma0 * alt;
}

LinOp term_expression(const SystemTerm& t, const std::vector<LinOp>& q) {
  LinOp e = q[t.var];
  for (int i = 0; i < t.dt; ++i) e = e.dt();
  for (int i = 0; i < t.dx; ++i) e = e.dx();
  return t.coeff * e.times_tau(t.tau_power);
}

void generic_system(BarConstruction& c) {
  const BarSpec& s = c.spec;
  const int m = s.m;
  c.equations.assign(static_cast<std::size_t>(m), {});
  c.equations[0] = {{{0, 1.0, 0, 1, 0}, {static_cast<std::size_t>(m - 1), double(s.sigma0), 0, 0, 1}}, true};
  for (int j = 1; j < m; ++j) {
    const double sj = generic_sign(s, j);
    auto& eq = c.equations[static_cast<std::size_t>(j)].terms;
    eq.push_back({static_cast<std::size_t>(j), 1.0, 1, 1, 0});
    eq.push_back({static_cast<std::size_t>(m - j - 1), sj, 0, 0, 1});
    eq.push_back({static_cast<std::size_t>(m - j), -sj, 0, 0, 0});
    if (j == 1 && s.kind == BarKind::odd_m && s.mu != 0.0) eq.push_back({1, s.mu, 0, 0, 0});
  }
}

struct Solver {
  BarConstruction& c;
  std::vector<bool> known;

  void assign(std::size_t var, LinOp value, const std::string& what) {
    c.q[var] = std::move(value);
    known[var] = true;
    c.steps.push_back(fmt::format("q{} = {}", var, what));
  }

  /// Solves equation `eq` for `var`, which must appear there exactly once
  /// with tau power 0, no t-derivative, and x-order 0 or 1.
  void solve(std::size_t eq, std::size_t var) {
    const SystemTerm* pivot = nullptr;
    LinOp rest;
    for (const SystemTerm& t : c.equations[eq].terms) {
      if (t.var == var && !known[var]) {
        if (pivot || t.tau_power != 0 || t.dt != 0 || t.dx > 1)
          throw std::logic_error(fmt::format("equation {} cannot be solved for q{}", eq, var));
        pivot = &t;
        continue;
      }
      if (!known[t.var]) throw std::logic_error(fmt::format("equation {} needs q{} before q{}", eq, t.var, var));
      rest += term_expression(t, c.q);
    }
    if (!pivot) throw std::logic_error(fmt::format("equation {} does not contain q{}", eq, var));
    LinOp value = (-1.0 / pivot->coeff) * rest;
    if (pivot->dx == 1) value = value.primitive_x();
    c.q[var] = value;
    known[var] = true;
    c.steps.push_back(fmt::format("q{} from equation {}{}", var, eq, pivot->dx == 1 ? " (x-primitive)" : ""));
  }
};

}  // namespace

BarConstruction build_bar_construction(const BarSpec& spec) {
  BarConstruction c;
  c.spec = spec;
  const LinOp w = LinOp::identity();
  int fields = 0;
  switch (spec.kind) {
    case BarKind::mixed: fields = 3; break;
    case BarKind::kawahara: fields = 5; break;
    case BarKind::ks: fields = 4; break;
    case BarKind::odd_m:
      if (spec.m < 3 || spec.m > 5 || spec.m % 2 == 0) throw DomainError("odd_m needs m in {3, 5}");
      if (std::abs(spec.sigma0) != 1) throw DomainError("sigma0 must be +1 or -1");
      fields = spec.m;
      break;
    case BarKind::even_m:
      if (spec.m < 2 || spec.m > 4 || spec.m % 2 != 0) throw DomainError("even_m needs m in {2, 4}");
      if (spec.mu != 0.0) throw DomainError("even_m has no damping term");
      c.spec.sigma0 = (spec.m / 2) % 2 == 0 ? 1 : -1;
      fields = spec.m;
      break;
  }
  const std::size_t n = static_cast<std::size_t>(fields);
  c.q.assign(n, LinOp{});
  c.target.assign(n, LinOp{});
  for (std::size_t j = 0; j < n; ++j) c.target[j] = dx_power(static_cast<int>(j));
  Solver s{c, std::vector<bool>(n, false)};

  switch (spec.kind) {
    case BarKind::mixed:
      c.equations = {
          {{{0, 1.0, 0, 1, 0}, {2, 1.0, 0, 0, 1}}, true},
          {{{1, 1.0, 0, 1, 0}, {1, 1.0, 1, 0, 1}, {2, 1.0, 0, 0, 0}}, false},
          {{{2, 1.0, 1, 1, 0}, {0, 1.0, 0, 0, 1}, {1, -1.0, 0, 0, 0}}, false},
      };
      c.target[2] = -LinOp::term(1.0, 0, 1, 1);
      c.limit_linear = LinOp::term(1.0, 0, 1, 0) - LinOp::term(1.0, 0, 1, 2);
      s.assign(0, w, "w");
      s.assign(2, c.target[2], "-w_tx");
      s.solve(2, 1);
      c.residual_equation = 1;
      c.residual_linear =
          -LinOp::term(1.0, 0, 3, 1) + LinOp::term(1.0, 0, 0, 2) - LinOp::term(1.0, 1, 2, 2);
      c.printed_residual = true;
      return c;

    case BarKind::kawahara:
      c.equations = {
          {{{0, 1.0, 0, 1, 0}, {4, -1.0, 0, 0, 1}}, true},
          {{{1, 1.0, 1, 1, 0}, {1, -1.0, 0, 0, 1}, {3, 1.0, 0, 0, 1}, {4, -1.0, 0, 0, 0}}, false},
          {{{2, 1.0, 1, 1, 0}, {2, -1.0, 0, 0, 1}, {3, 1.0, 0, 0, 0}}, false},
          {{{3, 1.0, 1, 1, 0}, {1, 1.0, 0, 0, 1}, {2, -1.0, 0, 0, 0}}, false},
          {{{4, 1.0, 1, 1, 0}, {0, -1.0, 0, 0, 1}, {1, 1.0, 0, 0, 0}}, false},
      };
      c.target[4] = dx_power(4) - dx_power(2);
      c.limit_linear = LinOp::term(1.0, 0, 1, 0) + dx_power(3) - dx_power(5);
      s.assign(2, dx_power(2), "w_xx");
      s.solve(2, 3);
      s.solve(3, 1);
      s.solve(1, 4);
      s.solve(4, 0);
      break;

    case BarKind::ks:
      c.equations = {
          {{{0, 1.0, 0, 1, 0}, {2, 1.0, 0, 0, 0}, {3, 1.0, 0, 0, 1}}, true},
          {{{1, 1.0, 1, 1, 0}, {2, -1.0, 0, 0, 1}, {3, 1.0, 0, 0, 0}}, false},
          {{{2, 1.0, 1, 1, 0}, {1, -1.0, 0, 0, 1}, {2, 1.0, 0, 0, 0}}, false},
          {{{3, 1.0, 1, 1, 0}, {0, 1.0, 0, 0, 1}, {1, -1.0, 0, 0, 0}}, false},
      };
      c.limit_linear = LinOp::term(1.0, 0, 1, 0) + dx_power(2) + dx_power(4);
      s.assign(2, dx_power(2), "w_xx");
      s.solve(2, 1);
      s.solve(1, 3);
      s.solve(3, 0);
      break;

    case BarKind::odd_m: {
      generic_system(c);
      const int m = spec.m, h = (m - 1) / 2;
      c.target[n - 1] = dx_power(m - 1) - (c.spec.sigma0 * spec.mu) * dx_power(1);
      c.limit_linear = LinOp::term(1.0, 0, 1, 0) - spec.mu * dx_power(2) + double(c.spec.sigma0) * dx_power(m);
      s.assign(static_cast<std::size_t>(h), dx_power(h), fmt::format("d_x^{} w", h));
      for (int k = 1; k <= m - 2; k += 2) {
        s.solve(static_cast<std::size_t>((m - k) / 2), static_cast<std::size_t>((m + k) / 2));
        s.solve(static_cast<std::size_t>((m + k) / 2), static_cast<std::size_t>((m - k - 2) / 2));
      }
      break;
    }

    case BarKind::even_m: {
      generic_system(c);
      const int m = spec.m, h = m / 2;
      c.limit_linear = LinOp::term(1.0, 0, 1, 0) + double(c.spec.sigma0) * dx_power(m);
      s.assign(static_cast<std::size_t>(h), dx_power(h), fmt::format("d_x^{} w", h));
      s.solve(static_cast<std::size_t>(h), static_cast<std::size_t>(h - 1));
      for (int k = 1; k <= h - 1; ++k) {
        s.solve(static_cast<std::size_t>(h - k), static_cast<std::size_t>(h + k));
        s.solve(static_cast<std::size_t>(h + k), static_cast<std::size_t>(h - k - 1));
      }
      break;
    }
  }

  // Principal equation: linear part minus the limit operator is O(tau).
  LinOp principal;
  for (const SystemTerm& t : c.equations[0].terms) principal += term_expression(t, c.q);
  LinOp defect = principal - c.limit_linear;
  for (const auto& [key, coeff] : defect.tau_power(0).terms())
    if (std::abs(coeff) > 1e-12)
      throw std::logic_error(fmt::format("{}: principal equation does not reduce to the limit", label(c.spec)));
  LinOp higher;
  for (const auto& [key, coeff] : defect.terms())
    if (std::get<0>(key) > 0) higher += LinOp::term(coeff, std::get<0>(key), std::get<1>(key), std::get<2>(key));
  c.residual_linear = higher.div_tau(1);
  c.residual_has_flux = true;
  c.principal = 0;
  c.residual_equation = 0;
  return c;
}

namespace {

/// Jets and derived expressions shared by the point evaluators.
struct PointEval {
  const BarConstruction& c;
  double tau;
  LinOp delta;    // (q0 - w) / tau
  LinOp delta_x;

  explicit PointEval(const BarConstruction& bc, double t) : c(bc), tau(t) {
    if (c.residual_has_flux) {
      delta = (c.q[0] - LinOp::identity()).div_tau(1);
      delta_x = delta.dx();
    }
  }

  /// Value and largest term magnitude of tau R.
  std::pair<double, double> tau_r(const Jet& w) const {
    double v = c.residual_linear.evaluate(tau, w);
    double scale = c.residual_linear.max_term(tau, w);
    if (c.residual_has_flux) {
      const double wx = w.derivative(0, 1), wv = w.value();
      const double d = delta.evaluate(tau, w), dx = delta_x.evaluate(tau, w);
      const double parts[3] = {wx * d, wv * dx, tau * d * dx};
      for (double p : parts) {
        v += p;
        scale = std::max(scale, std::abs(p));
      }
    }
    return {tau * v, tau * scale};
  }
};

int required_order(const BarConstruction& c) {
  int order = std::max(c.limit_linear.max_order(), c.residual_linear.max_order());
  for (const SystemEquation& e : c.equations)
    for (const SystemTerm& t : e.terms) order = std::max(order, c.q[t.var].max_order() + t.dt + t.dx);
  for (const LinOp& op : c.q) order = std::max(order, op.max_order() + 1);
  for (const LinOp& op : c.target) order = std::max(order, op.max_order());
  order = std::max(order, 1);
  if (order > Jet::kMaxOrder) throw DomainError(fmt::format("{} needs jets of order {}", label(c.spec), order));
  return order;
}

}  // namespace

BarState::BarState(BarConstruction c, SmoothProfile profile, double tau)
    : c_(std::move(c)), profile_(std::move(profile)), tau_(tau), order_(required_order(c_)) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be positive and finite");
}

double BarState::q(std::size_t j, double t, double x) const {
  if (j >= c_.q.size()) throw DomainError("component index out of range");
  return c_.q[j].evaluate(tau_, profile_.jet(order_, t, x));
}

double BarState::tau_residual(double t, double x) const {
  return PointEval(c_, tau_).tau_r(profile_.jet(order_, t, x)).first;
}

BarState construct_bar_q(const BarSpec& spec, const SmoothProfile& profile, double tau) {
  return BarState(build_bar_construction(spec), profile, tau);
}

IdentityReport verify_identities(const BarState& bar, const std::vector<std::pair<double, double>>& points,
                                 double rel_tol) {
  const BarConstruction& c = bar.construction();
  const double tau = bar.tau();
  const PointEval pe(c, tau);
  IdentityReport rep;
  rep.spec = c.spec;
  rep.tau = tau;
  const std::size_t neq = c.equations.size();
  for (std::size_t i = 0; i < neq; ++i) {
    const char* role = i == c.principal ? "principal" : (i == c.residual_equation ? "residual" : "auxiliary");
    rep.equations.push_back({i, role, 0.0, 0.0});
  }
  std::vector<std::vector<LinOp>> pieces(neq);
  for (std::size_t i = 0; i < neq; ++i)
    for (const SystemTerm& t : c.equations[i].terms) pieces[i].push_back(term_expression(t, c.q));
  const LinOp q0x = c.q[0].dx();
  std::vector<double> relative(neq, 0.0);

  for (const auto& [t, x] : points) {
    const Jet w = bar.profile().jet(bar.jet_order(), t, x);
    for (std::size_t i = 0; i < neq; ++i) {
      double sum = 0.0, scale = 0.0;
      for (const LinOp& p : pieces[i]) {
        sum += p.evaluate(tau, w);
        scale = std::max(scale, p.max_term(tau, w));
      }
      if (c.equations[i].flux) {
        const double q0 = c.q[0].evaluate(tau, w), dq0 = q0x.evaluate(tau, w);
        const double lim_flux = w.value() * w.derivative(0, 1);
        sum += q0 * dq0 - lim_flux;
        scale = std::max({scale, std::abs(q0 * dq0), std::abs(lim_flux)});
      }
      if (i == c.principal) {
        sum -= c.limit_linear.evaluate(tau, w);
        scale = std::max(scale, c.limit_linear.max_term(tau, w));
      }
      if (i == c.residual_equation) {
        const auto [r, rs] = pe.tau_r(w);
        sum -= r;
        scale = std::max(scale, rs);
      }
      EquationCheck& e = rep.equations[i];
      e.max_defect = std::max(e.max_defect, std::abs(sum));
      e.max_scale = std::max(e.max_scale, scale);
      if (scale > 0.0) relative[i] = std::max(relative[i], std::abs(sum) / scale);
      else if (sum != 0.0) relative[i] = std::numeric_limits<double>::infinity();
    }
  }
  for (std::size_t i = 0; i < neq; ++i) {
    if (i == c.principal || i == c.residual_equation)
      rep.max_residual_relative = std::max(rep.max_residual_relative, relative[i]);
    else
      rep.max_aux_relative = std::max(rep.max_aux_relative, relative[i]);
  }
  rep.pass = rep.max_aux_relative <= rel_tol && rep.max_residual_relative <= rel_tol;
  return rep;
}

ScalingReport scaling_study(const BarSpec& spec, const SmoothProfile& profile, const std::vector<double>& taus,
                            const std::vector<std::pair<double, double>>& points) {
  if (taus.size() < 2) throw DomainError("scaling_study needs at least two tau values");
  const BarConstruction c = build_bar_construction(spec);
  ScalingReport rep;
  rep.spec = c.spec;
  rep.taus = taus;
  const std::size_t n = c.q.size();
  std::vector<LinOp> diff(n);
  for (std::size_t j = 0; j < n; ++j) diff[j] = c.q[j] - c.target[j];
  rep.deviation.assign(n, std::vector<double>(taus.size(), 0.0));
  rep.residual.assign(taus.size(), 0.0);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const BarState bar(c, profile, taus[i]);
    const PointEval pe(c, taus[i]);
    for (const auto& [t, x] : points) {
      const Jet w = profile.jet(bar.jet_order(), t, x);
      for (std::size_t j = 0; j < n; ++j)
        rep.deviation[j][i] = std::max(rep.deviation[j][i], std::abs(diff[j].evaluate(taus[i], w)));
      rep.residual[i] = std::max(rep.residual[i], std::abs(pe.tau_r(w).first));
    }
  }
  auto slope_of = [&](const std::vector<double>& v) -> std::optional<double> {
    if (std::all_of(v.begin(), v.end(), [](double d) { return d == 0.0; })) return std::nullopt;
    return loglog_slope(taus, v);
  };
  for (std::size_t j = 0; j < n; ++j)
    rep.slopes.push_back(diff[j].is_zero() ? std::nullopt : slope_of(rep.deviation[j]));
  rep.residual_slope = slope_of(rep.residual);
  return rep;
}

std::vector<std::pair<double, double>> random_points(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, 1.0), ux(-std::numbers::pi, std::numbers::pi);
  std::vector<std::pair<double, double>> p(count);
  for (auto& [t, x] : p) {
    t = ut(rng);
    x = ux(rng);
  }
  return p;
}

void write_identity_csv(std::ostream& os, const std::vector<IdentityReport>& reports) {
  os << "kind,tau,equation,max_residual\n";
  std::map<std::string, std::pair<double, bool>> summary;
  std::vector<std::string> order;
  for (const IdentityReport& r : reports) {
    const std::string k = label(r.spec);
    for (const EquationCheck& e : r.equations)
      os << fmt::format("{},{:.6e},{},{:.6e}\n", k, r.tau, e.equation, e.max_defect);
    auto [it, inserted] = summary.try_emplace(k, 0.0, true);
    if (inserted) order.push_back(k);
    it->second.first = std::max({it->second.first, r.max_aux_relative, r.max_residual_relative});
    it->second.second = it->second.second && r.pass;
  }
  for (const std::string& k : order)
    os << fmt::format("# {} max_relative={:.3e} {}\n", k, summary[k].first, summary[k].second ? "PASS" : "FAIL");
}

}  // namespace hyperrelax
