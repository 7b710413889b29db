#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hyperrelax/study.hpp"

using namespace hyperrelax;

TEST_CASE("pre-floor mask stops at the first stagnating row and skips failed runs") {
  const std::vector<double> taus = {1e-1, 1e-2, 1e-3, 1e-4};
  const std::vector<bool> ok(4, true);
  CHECK(pre_floor_mask(taus, {1e-1, 1e-2, 1e-3, 1e-4}, ok) == std::vector<bool>{true, true, true, true});
  CHECK(pre_floor_mask(taus, {1e-1, 1e-2, 9.8e-3, 1e-5}, ok) == std::vector<bool>{true, true, false, false});
  CHECK(pre_floor_mask(taus, {1e-1, 1e-2, 1e-3, 1e-4}, {true, false, true, true}) ==
        std::vector<bool>{true, false, true, true});
}

TEST_CASE("growth exponent recovers synthetic power laws") {
  std::vector<double> t, quad, lin;
  for (int i = 1; i <= 60; ++i) {
    t.push_back(i);
    quad.push_back(3e-4 * i * i);
    lin.push_back(2e-3 * i);
  }
  CHECK(*growth_exponent(t, quad, 60.0, 20.0) == doctest::Approx(2.0));
  CHECK(*growth_exponent(t, lin, 60.0, 20.0) == doctest::Approx(1.0));
  CHECK_FALSE(growth_exponent({1.0}, {1.0}, 1.0, 0.5).has_value());
}

TEST_CASE("study validation") {
  StudyConfig c = desk_config("biharmonic");
  CHECK_NOTHROW(validate(c));
  StudyConfig bad = c;
  bad.tau_list = {1e-3, 1e-2};
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = c;
  bad.tau_list = {-1.0};
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = c;
  bad.limit_model.clear();
  bad.reference = ErrorReference::limit_numeric;
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad = desk_config("ks");
  bad.reference = ErrorReference::exact;
  CHECK_THROWS_AS(validate(bad), DomainError);
  CHECK_THROWS_AS(desk_config("heat"), DomainError);
  for (const auto& f : study_families()) {
    CAPTURE(f);
    CHECK_NOTHROW(validate(desk_config(f)));
    CHECK_NOTHROW(validate(published_config(f)));
  }
}

TEST_CASE("initial condition parser") {
  const ModelSpec m = make_model("kdv_limit", Grid(-10.0, 10.0, 40), 3);
  const Field g = initial_condition("gaussian(2, 0.5)", m);
  CHECK(g[20] == doctest::Approx(2.0));
  CHECK(g[21] == doctest::Approx(2.0 * std::exp(-0.5 * 0.25)));
  const Field s = initial_condition("sine(2)", m);
  CHECK(s[5] == doctest::Approx(std::sin(2.0 * m.grid().node(5))));
  CHECK_THROWS_AS(initial_condition("gausian(1,1)", m), DomainError);
  CHECK_THROWS_AS(initial_condition("gaussian(1)", m), DomainError);
  CHECK_THROWS_AS(initial_condition("exact", m), DomainError);
}

TEST_CASE("biharmonic study converges at first order and writes a reproducible table") {
  StudyConfig c = desk_config("biharmonic");
  c.T = 0.5;
  c.tau_list = {1e-2, 1e-3, 1e-4};
  const StudyResult a = converge_tau(c);
  REQUIRE(a.slopes[0].has_value());
  CHECK(*a.slopes[0] == doctest::Approx(1.0).epsilon(0.1));
  const StudyResult b = converge_tau(c);
  std::ostringstream sa, sb;
  write_convergence_csv(sa, a);
  write_convergence_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("tau,err_q0,err_q1,err_q2,err_q3\n", 0) == 0);
  CHECK(sa.str().find("# slope_q0=") != std::string::npos);
  c.tau_list = {1e-3};
  std::ostringstream one;
  write_convergence_csv(one, converge_tau(c));
  CHECK(one.str().find("# slope_q0=n/a") != std::string::npos);
}

TEST_CASE("error growth produces labelled series with relaxation") {
  StudyConfig c = desk_config("kawahara");
  c.n = 64;
  c.order = 3;
  c.dt = 0.2;
  c.traversals = 0.02;
  c.samples_per_traversal = 50;
  c.tau_list = {1e-3};
  const GrowthReport r = error_growth(c);
  REQUIRE(r.series.size() == 4);
  CHECK(r.series[0].label == "kawahara_limit_plain");
  CHECK(r.series[3].label == "kawahara_hyper_tau1e-03_relaxed");
  for (const auto& s : r.series) {
    CAPTURE(s.label);
    CHECK(s.finite);
    CHECK(s.t.size() == s.error.size());
    if (s.relaxation) CHECK(s.max_invariant_drift <= 1e-12);
  }
  std::ostringstream os;
  write_growth_csv(os, r.series[1]);
  CHECK(os.str().rfind("t,error,gamma\n", 0) == 0);
}
