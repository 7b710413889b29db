#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hyperrelax/grid.hpp"

namespace hyperrelax {

/// How a relaxed run reaches the final time. `land_on_t` retries the last
/// step with a rescaled dt until t + gamma dt hits T; `accept_near_t` stops at
/// the first relaxed time at or past T minus a small tolerance.
enum class LandingPolicy { land_on_t, accept_near_t };

struct RelaxationConfig {
  std::vector<double> weights;
  double gamma_floor = 1e-14;
  bool enabled = false;
  LandingPolicy landing = LandingPolicy::land_on_t;
};

/// Weighted quadratic invariant I(q) = 1/2 sum_j w_j |q_j|^2.
double quadratic_invariant(const State& q, std::span<const double> weights);

/// Nonzero root gamma of I(q_old + gamma d) = I(q_old), d = q_new - q_old;
/// returns 1 when <d,d>_W <= gamma_floor <q_old,q_old>_W.
double relaxation_gamma(const State& q_old, const State& q_new, std::span<const double> weights,
                        double gamma_floor = 1e-14);

/// (q_old + gamma (q_new - q_old), t + gamma dt) together with gamma.
struct RelaxedStep {
  State state;
  double time;
  double gamma;
};
RelaxedStep relaxed_update(const State& q_old, const State& q_new, double t, double dt, const RelaxationConfig& cfg);

}  // namespace hyperrelax
