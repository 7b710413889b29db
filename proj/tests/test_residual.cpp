#include <doctest.h>

#include <cmath>

#include "hyperrelax/residual.hpp"

using namespace hyperrelax;

namespace {

double d(const SmoothProfile& p, int a, int b, double t, double x) { return p.derivative(a, b, t, x); }

}  // namespace

TEST_CASE("odd m = 3 lift matches the hand-solved components") {
  const SmoothProfile w = SmoothProfile::random_trig(11);
  const double tau = 0.03;
  const BarState bar = construct_bar_q({BarKind::odd_m, 3, 1, 0.0}, w, tau);
  for (const auto& [t, x] : random_points(10, 5)) {
    const double q0 = d(w, 0, 0, t, x) - tau * d(w, 1, 1, t, x) + tau * tau * d(w, 2, 0, t, x);
    const double q2 = d(w, 0, 2, t, x) - tau * d(w, 1, 1, t, x);
    CHECK(bar.q(0, t, x) == doctest::Approx(q0).epsilon(1e-12));
    CHECK(bar.q(1, t, x) == doctest::Approx(d(w, 0, 1, t, x)).epsilon(1e-12));
    CHECK(bar.q(2, t, x) == doctest::Approx(q2).epsilon(1e-12));
  }
}

TEST_CASE("mixed lift and its printed residual") {
  const SmoothProfile w = SmoothProfile::random_trig(3);
  const double tau = 0.01;
  const BarState bar = construct_bar_q({BarKind::mixed}, w, tau);
  for (const auto& [t, x] : random_points(10, 6)) {
    CHECK(bar.q(0, t, x) == doctest::Approx(w.value(t, x)).epsilon(1e-13));
    CHECK(bar.q(1, t, x) == doctest::Approx(d(w, 0, 1, t, x) - tau * d(w, 2, 1, t, x)).epsilon(1e-12));
    CHECK(bar.q(2, t, x) == doctest::Approx(-d(w, 1, 1, t, x)).epsilon(1e-13));
    const double r = -d(w, 3, 1, t, x) + d(w, 0, 2, t, x) - tau * d(w, 2, 2, t, x);
    CHECK(bar.tau_residual(t, x) == doctest::Approx(tau * r).epsilon(1e-12));
  }
}

TEST_CASE("kawahara lift third component") {
  const SmoothProfile w = SmoothProfile::random_trig(8);
  const double tau = 0.02;
  const BarState bar = construct_bar_q({BarKind::kawahara}, w, tau);
  for (const auto& [t, x] : random_points(5, 7))
    CHECK(bar.q(3, t, x) == doctest::Approx(d(w, 0, 3, t, x) - tau * d(w, 1, 2, t, x)).epsilon(1e-12));
}

TEST_CASE("every kind satisfies its identities and reduces to the targets") {
  const std::vector<BarSpec> specs = {{BarKind::mixed},       {BarKind::odd_m, 3, 1, 0.0}, {BarKind::odd_m, 3, 1, 0.1},
                                      {BarKind::odd_m, 5, -1, 0.0}, {BarKind::even_m, 4},      {BarKind::even_m, 2},
                                      {BarKind::kawahara},    {BarKind::ks}};
  const auto pts = random_points(20, 9);
  for (const BarSpec& s : specs) {
    CAPTURE(to_string(s.kind));
    CAPTURE(s.m);
    for (double tau : {1e-1, 1e-3}) {
      const IdentityReport r = verify_identities(construct_bar_q(s, SmoothProfile::random_trig(21), tau), pts);
      CHECK(r.pass);
      CHECK(r.max_aux_relative < 1e-11);
    }
    const BarConstruction c = build_bar_construction(s);
    for (std::size_t j = 0; j < c.q.size(); ++j) CHECK(c.q[j].tau_power(0) == c.target[j]);
  }
}

TEST_CASE("deviation and residual scale linearly in tau") {
  const std::vector<double> taus = {1e-2, 1e-3, 1e-4, 1e-5};
  const auto pts = random_points(10, 1);
  const ScalingReport r = scaling_study({BarKind::kawahara}, SmoothProfile::random_trig(4), taus, pts);
  REQUIRE(r.residual_slope.has_value());
  CHECK(*r.residual_slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK_FALSE(r.slopes[2].has_value());
  for (std::size_t j : {0u, 1u, 3u, 4u}) {
    REQUIRE(r.slopes[j].has_value());
    CHECK(*r.slopes[j] == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("a broken identity is detected") {
  BarConstruction c = build_bar_construction({BarKind::ks});
  c.q[2] += LinOp::term(1e-6, 1, 0, 1);
  const BarState bar(c, SmoothProfile::random_trig(2), 0.1);
  CHECK_FALSE(verify_identities(bar, random_points(10, 3)).pass);
}

TEST_CASE("invalid kinds are rejected") {
  CHECK_THROWS_AS(build_bar_construction({BarKind::odd_m, 4}), DomainError);
  CHECK_THROWS_AS(build_bar_construction({BarKind::even_m, 3}), DomainError);
  CHECK_THROWS_AS(parse_bar_kind("heat"), DomainError);
}

TEST_CASE("ks lift matches the closed forms") {
  const SmoothProfile w = SmoothProfile::random_trig(17);
  const double tau = 0.05;
  const BarState bar = construct_bar_q({BarKind::ks}, w, tau);
  for (const auto& [t, x] : random_points(10, 8)) {
    const double q1 = d(w, 0, 1, t, x) + tau * d(w, 1, 1, t, x);
    const double q3 = d(w, 0, 3, t, x) - tau * d(w, 1, 1, t, x) - tau * tau * d(w, 2, 1, t, x);
    const double q0 = w.value(t, x) + tau * d(w, 1, 0, t, x) -
                      tau * (d(w, 1, 2, t, x) - tau * d(w, 2, 0, t, x) - tau * tau * d(w, 3, 0, t, x));
    CHECK(bar.q(0, t, x) == doctest::Approx(q0).epsilon(1e-12));
    CHECK(bar.q(1, t, x) == doctest::Approx(q1).epsilon(1e-12));
    CHECK(bar.q(2, t, x) == doctest::Approx(d(w, 0, 2, t, x)).epsilon(1e-12));
    CHECK(bar.q(3, t, x) == doctest::Approx(q3).epsilon(1e-12));
  }
}
