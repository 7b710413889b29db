#include "hyperrelax/grid.hpp"

#include <cmath>

#include <fmt/format.h>

namespace hyperrelax {

Grid::Grid(double left, double right, std::size_t n) : left_(left), right_(right), n_(n) {
  if (n < 3) throw DomainError(fmt::format("grid needs at least 3 points, got {}", n));
  if (!(right > left) || !std::isfinite(left) || !std::isfinite(right))
    throw DomainError(fmt::format("invalid domain [{}, {}]", left, right));
  h_ = (right - left) / static_cast<double>(n);
  auto nodes = std::make_shared<std::vector<double>>(n);
  for (std::size_t i = 0; i < n; ++i) (*nodes)[i] = left + static_cast<double>(i) * h_;
  nodes_ = std::move(nodes);
}

double Grid::wrap(double x) const {
  const double L = length();
  double y = std::fmod(x - left_, L);
  if (y < 0) y += L;
  return left_ + y;
}

Grid make_grid(double left, double right, std::size_t n) { return Grid(left, right, n); }

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw DomainError(fmt::format("{}: grid mismatch", where));
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size())
    throw DomainError(fmt::format("field length {} does not match grid size {}", values.size(), g.size()));
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid, other.grid, "Field::operator+=");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid, other.grid, "Field::operator-=");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= other.values[i];
  return *this;
}

Field& Field::operator*=(double a) {
  for (auto& v : values) v *= a;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

State::State(const Grid& g, std::size_t components) : grid_(g), fields_(components, Field(g)) {}

namespace {
const Grid& first_grid(const std::vector<Field>& fields) {
  if (fields.empty()) throw DomainError("State needs at least one field");
  return fields.front().grid;
}
}  // namespace

State::State(std::vector<Field> fields) : grid_(first_grid(fields)), fields_(std::move(fields)) {
  for (const auto& f : fields_) require_same_grid(grid_, f.grid, "State");
}

State& State::axpy(double a, const State& x) {
  if (x.components() != components()) throw DomainError("State::axpy: component count mismatch");
  for (std::size_t j = 0; j < fields_.size(); ++j) {
    auto& y = fields_[j].values;
    const auto& xv = x.fields_[j].values;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * xv[i];
  }
  return *this;
}

State& State::operator*=(double a) {
  for (auto& f : fields_) f *= a;
  return *this;
}

void State::set_zero() {
  for (auto& f : fields_) std::fill(f.values.begin(), f.values.end(), 0.0);
}

bool State::all_finite() const {
  for (const auto& f : fields_)
    for (double v : f.values)
      if (!std::isfinite(v)) return false;
  return true;
}

State operator-(State a, const State& b) { return a.axpy(-1.0, b); }
State operator+(State a, const State& b) { return a.axpy(1.0, b); }

namespace {

double pairwise_rec(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_rec(v, half) + pairwise_rec(v + half, n - half);
}

template <class Op>
double pairwise_transform(std::size_t n, Op&& op) {
  // Materialize the products so the reduction order is identical to
  // pairwise_sum on the same length.
  thread_local std::vector<double> buf;
  buf.resize(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = op(i);
  return pairwise_rec(buf.data(), n);
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_rec(v.data(), v.size()); }

double l2_inner(const Field& f, const Field& g) {
  require_same_grid(f.grid, g.grid, "l2_inner");
  const auto& a = f.values;
  const auto& b = g.values;
  return f.grid.h() * pairwise_transform(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double l2_norm(const Field& f) { return std::sqrt(l2_inner(f, f)); }

double mass(const Field& f) { return f.grid.h() * pairwise_sum(f.values); }

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double weighted_inner(const State& a, const State& b, std::span<const double> weights) {
  if (a.components() != b.components() || weights.size() != a.components())
    throw DomainError("weighted_inner: component count mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.components(); ++j) s += weights[j] * l2_inner(a[j], b[j]);
  return s;
}

void write_field_csv(std::ostream& os, const Field& f, const std::string& name) {
  os << "x," << name << '\n';
  for (std::size_t i = 0; i < f.size(); ++i) os << fmt::format("{:.17g},{:.17g}\n", f.grid.node(i), f.values[i]);
}

}  // namespace hyperrelax
