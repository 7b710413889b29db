#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperrelax/fit.hpp"
#include "hyperrelax/grid.hpp"

using namespace hyperrelax;

TEST_CASE("grid nodes and periodic wrap") {
  const Grid g(-1.0, 3.0, 8);
  CHECK(g.h() == doctest::Approx(0.5));
  CHECK(g.node(0) == -1.0);
  CHECK(g.node(7) == doctest::Approx(2.5));
  CHECK(g.wrap(3.25) == doctest::Approx(-0.75));
  CHECK(g.wrap(-1.5) == doctest::Approx(2.5));
  CHECK(g.wrap(11.0) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(Grid(0.0, 1.0, 2), DomainError);
  CHECK_THROWS_AS(Grid(1.0, 1.0, 16), DomainError);
  CHECK_THROWS_AS(Grid(0.0, NAN, 16), DomainError);
}

TEST_CASE("norms and mass use the trapezoidal weight h") {
  const Grid g(0.0, 2.0 * std::numbers::pi, 64);
  const Field one = Field::sample(g, [](double) { return 1.0; });
  CHECK(l2_norm(one) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)));
  CHECK(mass(one) == doctest::Approx(2.0 * std::numbers::pi));
  const Field s = Field::sample(g, [](double x) { return std::sin(x); });
  const Field c = Field::sample(g, [](double x) { return std::cos(x); });
  CHECK(std::abs(mass(s)) < 1e-14);
  CHECK(std::abs(l2_inner(s, c)) < 1e-14);
  CHECK(l2_inner(s, s) == doctest::Approx(std::numbers::pi));
  CHECK(max_abs(c) == doctest::Approx(1.0));
}

TEST_CASE("state arithmetic and weighted inner product") {
  const Grid g(0.0, 1.0, 4);
  State a(g, 2), b(g, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    a[0][i] = 1.0;
    a[1][i] = 2.0;
    b[0][i] = 3.0;
    b[1][i] = -1.0;
  }
  const std::vector<double> w = {1.0, 0.5};
  CHECK(weighted_inner(a, b, w) == doctest::Approx(3.0 - 1.0));
  a.axpy(2.0, b);
  CHECK(a[0][2] == 7.0);
  CHECK(a[1][3] == 0.0);
  CHECK(a.all_finite());
  a[1][1] = NAN;
  CHECK_FALSE(a.all_finite());
  CHECK_THROWS_AS(require_same_grid(g, Grid(0.0, 1.0, 5), "test"), DomainError);
}

TEST_CASE("pairwise sum is exact on integers and independent of data order within blocks") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 499500.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("least-squares slopes") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y = {3.0, 5.0, 7.0, 9.0};
  CHECK(least_squares_slope(x, y) == doctest::Approx(2.0));
  const std::vector<double> tau = {1e-1, 1e-2, 1e-3};
  const std::vector<double> e = {2e-2, 2e-4, 2e-6};
  CHECK(loglog_slope(tau, e) == doctest::Approx(2.0));
  CHECK_THROWS(least_squares_slope(std::vector<double>{1.0}, std::vector<double>{1.0}));
}
