#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hyperrelax/sbp.hpp"

using namespace hyperrelax;

namespace {

Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field f(g);
  for (double& v : f.values) v = u(rng);
  return f;
}

}  // namespace

TEST_CASE("first-order pair is the forward and backward difference") {
  const Grid g(0.0, 1.0, 10);
  const OperatorSet ops = build_upwind_pair(1, g);
  Field u = Field::sample(g, [](double x) { return x * x; });
  const Field dp = ops.dplus.apply(u), dm = ops.dminus.apply(u);
  for (std::size_t i = 1; i + 1 < 10; ++i) {
    CHECK(dp[i] == doctest::Approx((u[i + 1] - u[i]) / g.h()));
    CHECK(dm[i] == doctest::Approx((u[i] - u[i - 1]) / g.h()));
  }
}

TEST_CASE("unit stencils differentiate monomials exactly up to their order") {
  for (int p = 1; p <= kMaxUpwindOrder; ++p) {
    CAPTURE(p);
    const UnitStencil s = upwind_unit_stencil(p);
    for (int k = 0; k <= p; ++k) {
      double moment = 0.0;
      for (std::size_t j = 0; j < s.offsets.size(); ++j) moment += s.weights[j] * std::pow(s.offsets[j], k);
      CHECK(moment == doctest::Approx(k == 1 ? 1.0 : 0.0).scale(1.0));
    }
  }
}

TEST_CASE("adjoint, skew-symmetry and dissipation for every order") {
  std::mt19937_64 rng(3);
  const Grid g(-2.0, 5.0, 64);
  for (int p = 1; p <= kMaxUpwindOrder; ++p) {
    CAPTURE(p);
    const OperatorSet ops = build_upwind_pair(p, g);
    for (int trial = 0; trial < 5; ++trial) {
      const Field f = random_field(g, rng), h = random_field(g, rng);
      const double scale = l2_norm(f) * l2_norm(h) / g.h();
      CHECK(std::abs(l2_inner(ops.dplus.apply(f), h) + l2_inner(f, ops.dminus.apply(h))) < 1e-13 * scale);
      CHECK(std::abs(l2_inner(f, ops.dcentral.apply(f))) < 1e-13 * scale);
      CHECK(l2_inner(f, (ops.dplus - ops.dminus).apply(f)) <= 1e-13 * scale);
    }
    for (int k = 0; k <= 200; ++k) {
      const double theta = std::numbers::pi * k / 200.0;
      CHECK(fourier_symbol(ops.dplus, theta).real() <= 1e-12 / g.h());
    }
  }
}

TEST_CASE("negated transpose and composition agree with repeated application") {
  std::mt19937_64 rng(8);
  const Grid g(0.0, 1.0, 32);
  const OperatorSet ops = build_upwind_pair(3, g);
  const Field f = random_field(g, rng);
  const Field twice = ops.dplus.apply(ops.dminus.apply(f));
  const Field once = ops.dplus.compose(ops.dminus).apply(f);
  for (std::size_t i = 0; i < 32; ++i) CHECK(once[i] == doctest::Approx(twice[i]).epsilon(1e-12));
  const Field a = ops.dplus.negated_transpose().apply(f), b = ops.dminus.apply(f);
  for (std::size_t i = 0; i < 32; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("audit reports the nominal orders") {
  for (int p : {1, 3, 7}) {
    CAPTURE(p);
    const OperatorAudit a = audit_operators(p, 128);
    CHECK(a.adjoint_defect < 1e-12);
    CHECK(a.skew_defect < 1e-12);
    CHECK(a.max_symbol_real <= 1e-12);
    CHECK(a.max_quadratic_form <= 1e-12);
    CHECK(std::abs(a.observed_order - p) <= 0.25);
  }
}

TEST_CASE("operator dump lists the three operators") {
  std::ostringstream os;
  dump_operator_set(os, build_upwind_pair(2, Grid(0.0, 1.0, 16)));
  const std::string s = os.str();
  CHECK(s.find("2") != std::string::npos);
  std::size_t lines = 0;
  for (char c : s) lines += c == '\n';
  CHECK(lines >= 4);
}

TEST_CASE("unsupported orders and too-small grids are rejected") {
  CHECK_THROWS_AS(build_upwind_pair(0, Grid(0.0, 1.0, 16)), DomainError);
  CHECK_THROWS_AS(build_upwind_pair(kMaxUpwindOrder + 1, Grid(0.0, 1.0, 16)), DomainError);
  CHECK_THROWS_AS(build_upwind_pair(7, Grid(0.0, 1.0, 4)), DomainError);
}
