#include "hyperrelax/relaxation.hpp"

#include <stdexcept>

namespace hyperrelax {

double quadratic_invariant(const State& q, std::span<const double> weights) {
  return 0.5 * weighted_inner(q, q, weights);
}

double relaxation_gamma(const State& q_old, const State& q_new, std::span<const double> weights, double gamma_floor) {
  require_same_grid(q_old.grid(), q_new.grid(), "relaxation_gamma");
  const State d = q_new - q_old;
  const double dd = weighted_inner(d, d, weights);
  const double qq = weighted_inner(q_old, q_old, weights);
  if (dd <= gamma_floor * qq || dd == 0.0) return 1.0;
  return -2.0 * weighted_inner(q_old, d, weights) / dd;
}

RelaxedStep relaxed_update(const State& q_old, const State& q_new, double t, double dt, const RelaxationConfig& cfg) {
  if (!cfg.enabled) return {q_new, t + dt, 1.0};
  for (double w : cfg.weights)
    if (!(w > 0.0)) throw DomainError("relaxation weights must be strictly positive");
  const double gamma = relaxation_gamma(q_old, q_new, cfg.weights, cfg.gamma_floor);
  if (gamma == 1.0) return {q_new, t + dt, 1.0};
  State out = q_old;
  out.axpy(gamma, q_new - q_old);
  return {std::move(out), t + gamma * dt, gamma};
}

}  // namespace hyperrelax
