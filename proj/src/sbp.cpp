#include "hyperrelax/sbp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "hyperrelax/fit.hpp"

namespace hyperrelax {

CirculantOperator::CirculantOperator(const Grid& grid, std::vector<int> offsets, std::vector<double> coeffs)
    : grid_(grid), offsets_(std::move(offsets)), coeffs_(std::move(coeffs)) {
  if (offsets_.size() != coeffs_.size()) throw DomainError("CirculantOperator: offsets/coeffs length mismatch");
}

int CirculantOperator::width() const {
  if (offsets_.empty()) return 0;
  auto [lo, hi] = std::minmax_element(offsets_.begin(), offsets_.end());
  return *hi - *lo + 1;
}

void CirculantOperator::apply_into(std::span<const double> f, std::span<double> out) const {
  const long n = static_cast<long>(f.size());
  const std::size_t m = offsets_.size();
  // Interior range where no index wraps.
  int lo = 0, hi = 0;
  for (int o : offsets_) {
    lo = std::min(lo, o);
    hi = std::max(hi, o);
  }
  const long first = -lo;
  const long last = n - hi;  // exclusive
  for (long i = 0; i < n; ++i) {
    double s = 0.0;
    if (i >= first && i < last) {
      for (std::size_t j = 0; j < m; ++j) s += coeffs_[j] * f[i + offsets_[j]];
    } else {
      for (std::size_t j = 0; j < m; ++j) {
        long k = (i + offsets_[j]) % n;
        if (k < 0) k += n;
        s += coeffs_[j] * f[k];
      }
    }
    out[i] = s;
  }
}

Field CirculantOperator::apply(const Field& f) const {
  require_same_grid(grid_, f.grid, "CirculantOperator::apply");
  Field out(grid_);
  apply_into(f.values, out.values);
  return out;
}

std::complex<double> CirculantOperator::symbol(double theta) const {
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < offsets_.size(); ++j) s += coeffs_[j] * std::polar(1.0, offsets_[j] * theta);
  return s;
}

namespace {

CirculantOperator from_map(const Grid& g, const std::map<int, double>& m) {
  std::vector<int> off;
  std::vector<double> c;
  for (auto [k, v] : m) {
    if (v == 0.0) continue;
    off.push_back(k);
    c.push_back(v);
  }
  return CirculantOperator(g, std::move(off), std::move(c));
}

}  // namespace

CirculantOperator CirculantOperator::negated_transpose() const {
  std::map<int, double> m;
  for (std::size_t j = 0; j < offsets_.size(); ++j) m[-offsets_[j]] -= coeffs_[j];
  return from_map(grid_, m);
}

CirculantOperator CirculantOperator::compose(const CirculantOperator& other) const {
  require_same_grid(grid_, other.grid_, "CirculantOperator::compose");
  std::map<int, double> m;
  for (std::size_t a = 0; a < offsets_.size(); ++a)
    for (std::size_t b = 0; b < other.offsets_.size(); ++b)
      m[offsets_[a] + other.offsets_[b]] += coeffs_[a] * other.coeffs_[b];
  return from_map(grid_, m);
}

CirculantOperator CirculantOperator::scaled(double a) const {
  auto c = coeffs_;
  for (auto& v : c) v *= a;
  return CirculantOperator(grid_, offsets_, std::move(c));
}

CirculantOperator operator+(const CirculantOperator& a, const CirculantOperator& b) {
  require_same_grid(a.grid_, b.grid_, "CirculantOperator::operator+");
  std::map<int, double> m;
  for (std::size_t j = 0; j < a.offsets_.size(); ++j) m[a.offsets_[j]] += a.coeffs_[j];
  for (std::size_t j = 0; j < b.offsets_.size(); ++j) m[b.offsets_[j]] += b.coeffs_[j];
  return from_map(a.grid_, m);
}

CirculantOperator operator-(const CirculantOperator& a, const CirculantOperator& b) { return a + b.scaled(-1.0); }

Field apply(const CirculantOperator& op, const Field& f) { return op.apply(f); }

std::complex<double> fourier_symbol(const CirculantOperator& op, double theta) { return op.symbol(theta); }

const CirculantOperator& OperatorSet::get(Diff d) const {
  switch (d) {
    case Diff::plus: return dplus;
    case Diff::minus: return dminus;
    case Diff::central: return dcentral;
  }
  return dcentral;
}

UnitStencil upwind_unit_stencil(int order) {
  if (order < 1 || order > kMaxUpwindOrder)
    throw DomainError(fmt::format("unsupported upwind order {} (supported: 1..{})", order, kMaxUpwindOrder));
  const int r = (order + 1) / 2;
  const int lo = -(r - 1);
  const int hi = (order % 2 == 1) ? r : r + 1;
  UnitStencil st;
  for (int k = lo; k <= hi; ++k) st.offsets.push_back(k);
  // First-derivative weights at 0 from the Lagrange basis on the offsets;
  // this is the unique solution of the order conditions on p + 1 points.
  const std::size_t m = st.offsets.size();
  for (std::size_t j = 0; j < m; ++j) {
    long double w = 0.0L;
    const long double xj = st.offsets[j];
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      long double term = 1.0L / (xj - st.offsets[k]);
      for (std::size_t l = 0; l < m; ++l) {
        if (l == j || l == k) continue;
        term *= (0.0L - st.offsets[l]) / (xj - st.offsets[l]);
      }
      w += term;
    }
    st.weights.push_back(static_cast<double>(w));
  }
  return st;
}

OperatorSet build_upwind_pair(int order, const Grid& grid) {
  const UnitStencil st = upwind_unit_stencil(order);
  const int width = st.offsets.back() - st.offsets.front() + 1;
  // D+ and D- together span 2*max|offset|+1 points; require strictly more.
  const int span = 2 * std::max(std::abs(st.offsets.front()), std::abs(st.offsets.back())) + 1;
  if (static_cast<int>(grid.size()) <= std::max(width, span))
    throw DomainError(fmt::format("grid with {} points too small for order-{} stencil", grid.size(), order));
  std::vector<double> c = st.weights;
  for (auto& v : c) v /= grid.h();
  CirculantOperator dplus(grid, st.offsets, std::move(c));
  CirculantOperator dminus = dplus.negated_transpose();
  CirculantOperator dcentral = (dplus + dminus).scaled(0.5);
  return OperatorSet{order, std::move(dplus), std::move(dminus), std::move(dcentral)};
}

void dump_operator_set(std::ostream& os, const OperatorSet& ops) {
  const double h = ops.grid().h();
  os << "order " << ops.order << '\n';
  auto line = [&](const char* name, const CirculantOperator& op) {
    os << name;
    for (std::size_t j = 0; j < op.offsets().size(); ++j)
      os << fmt::format(" {}:{:.17g}", op.offsets()[j], op.coeffs()[j] * h);
    os << '\n';
  };
  line("dplus", ops.dplus);
  line("dminus", ops.dminus);
  line("dcentral", ops.dcentral);
}

OperatorAudit audit_operators(int order, std::size_t n, std::size_t random_trials, std::size_t theta_samples,
                              unsigned seed) {
  OperatorAudit a;
  const Grid g(0.0, 2.0 * std::numbers::pi, n);
  const OperatorSet ops = build_upwind_pair(order, g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto random_field = [&] {
    Field f(g);
    for (auto& v : f.values) v = nd(rng);
    return f;
  };
  for (std::size_t t = 0; t < random_trials; ++t) {
    const Field f = random_field();
    const Field gg = random_field();
    const Field dpf = ops.dplus.apply(f);
    const Field dmg = ops.dminus.apply(gg);
    const double lhs = l2_inner(dpf, gg);
    const double rhs = l2_inner(f, dmg);
    const double scale = std::max(1e-300, l2_norm(dpf) * l2_norm(gg) + l2_norm(f) * l2_norm(dmg));
    a.adjoint_defect = std::max(a.adjoint_defect, std::abs(lhs + rhs) / scale);

    const Field d1f = ops.dcentral.apply(f);
    a.skew_defect = std::max(a.skew_defect, std::abs(l2_inner(f, d1f)) / (l2_norm(f) * l2_norm(d1f)));

    const Field diss = dpf - ops.dminus.apply(f);
    const double q = l2_inner(f, diss) / (l2_norm(f) * std::max(1e-300, l2_norm(diss)));
    a.max_quadratic_form = std::max(a.max_quadratic_form, q);
  }
  a.max_symbol_real = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < theta_samples; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(theta_samples);
    a.max_symbol_real = std::max(a.max_symbol_real, ops.dplus.symbol(theta).real() * g.h());
  }

  std::vector<double> logh, loge;
  for (std::size_t nn : {16u, 32u, 64u, 128u}) {
    const Grid gr(0.0, 2.0 * std::numbers::pi, nn);
    const OperatorSet o = build_upwind_pair(order, gr);
    const Field s = Field::sample(gr, [](double x) { return std::sin(x); });
    const Field c = Field::sample(gr, [](double x) { return std::cos(x); });
    const double err = max_abs(o.dplus.apply(s) - c);
    a.refinement_errors.push_back(err);
    logh.push_back(std::log(gr.h()));
    loge.push_back(std::log(err));
  }
  a.observed_order = least_squares_slope(logh, loge);
  return a;
}

}  // namespace hyperrelax
