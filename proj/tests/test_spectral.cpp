#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperrelax/sbp.hpp"
#include "hyperrelax/spectral.hpp"

using namespace hyperrelax;

TEST_CASE("real FFT round trip and single-mode spectrum") {
  const std::size_t n = 16;
  RealFft fft(n);
  std::vector<double> u(n), back(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::cos(2.0 * std::numbers::pi * 3.0 * i / n);
  std::vector<std::complex<double>> hat(fft.modes());
  fft.forward(u, hat);
  for (std::size_t k = 0; k < hat.size(); ++k) CHECK(std::abs(hat[k] - (k == 3 ? 8.0 : 0.0)) < 1e-12);
  fft.inverse(hat, back);
  for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-14));
  CHECK(mode_angle(4, 16) == doctest::Approx(std::numbers::pi / 2.0));
}

TEST_CASE("block-circulant solve inverts the assembled operator") {
  const Grid g(0.0, 1.0, 24);
  const OperatorSet ops = build_upwind_pair(3, g);
  const double c = 0.3;
  // M = [[I - c D+, 0.5 I], [D-, I + D1 D1]]
  const BlockCirculantSolver solver(24, 2, [&](double th) {
    Eigen::MatrixXcd m(2, 2);
    m(0, 0) = 1.0 - c * ops.dplus.symbol(th);
    m(0, 1) = 0.5;
    m(1, 0) = ops.dminus.symbol(th);
    m(1, 1) = 1.0 + ops.dcentral.symbol(th) * ops.dcentral.symbol(th);
    return m;
  });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field r0(g), r1(g);
  for (std::size_t i = 0; i < 24; ++i) {
    r0[i] = dist(rng);
    r1[i] = dist(rng);
  }
  Field z0(g), z1(g);
  const std::span<const double> rhs[2] = {r0.values, r1.values};
  const std::span<double> out[2] = {z0.values, z1.values};
  solver.solve(rhs, out);
  const Field m0 = z0 - c * ops.dplus.apply(z0) + 0.5 * z1;
  const Field m1 = ops.dminus.apply(z0) + z1 + ops.dcentral.apply(ops.dcentral.apply(z1));
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(m0[i] == doctest::Approx(r0[i]).epsilon(1e-12));
    CHECK(m1[i] == doctest::Approx(r1[i]).epsilon(1e-12));
  }
  CHECK(solver.worst_condition() >= 1.0);
}

TEST_CASE("singular mode is reported") {
  const Grid g(0.0, 1.0, 16);
  const OperatorSet ops = build_upwind_pair(3, g);
  CHECK_THROWS(BlockCirculantSolver(16, 1, [&](double th) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = ops.dplus.symbol(th);
    return m;
  }));
}
