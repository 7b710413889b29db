#include "hyperrelax/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <regex>
#include <thread>

#include <fmt/format.h>

#include "hyperrelax/fit.hpp"
#include "hyperrelax/relaxation.hpp"

namespace hyperrelax {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs job(i) for i < count on up to job_threads() workers.
void run_jobs(std::size_t count, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min(job_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  for (std::thread& t : pool) t.join();
}

ModelSpec model_for(const StudyConfig& cfg, const std::string& name, double tau) {
  Params p = cfg.params;
  p.tau = tau;
  return make_model(name, Grid(cfg.left, cfg.right, cfg.n), cfg.order, p);
}

std::vector<double> parse_args(const std::string& args) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < args.size()) {
    const std::size_t comma = args.find(',', pos);
    const std::string tok = args.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw DomainError(fmt::format("bad initial-condition argument '{}'", tok));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

double final_time(const StudyConfig& cfg, const ModelSpec& model) {
  return cfg.traversals > 0.0 ? cfg.traversals * model.traversal_time() : cfg.T;
}

}  // namespace

std::size_t job_threads() {
  if (const char* env = std::getenv("HYPERRELAX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate(const StudyConfig& cfg) {
  if (cfg.hyper_model.empty() && cfg.limit_model.empty()) throw DomainError("no model configured");
  for (const std::string* m : {&cfg.limit_model, &cfg.hyper_model})
    if (!m->empty() && !is_model_name(*m)) throw DomainError(fmt::format("unknown model '{}'", *m));
  if (!(cfg.right > cfg.left)) throw DomainError("grid needs right > left");
  if (cfg.n < 8) throw DomainError("grid needs at least 8 points");
  if (!(cfg.dt > 0.0)) throw DomainError("dt must be positive");
  if (cfg.traversals <= 0.0 && !(cfg.T > 0.0)) throw DomainError("T must be positive");
  for (std::size_t i = 0; i < cfg.tau_list.size(); ++i) {
    if (!(cfg.tau_list[i] > 0.0)) throw DomainError("tau values must be positive");
    if (i > 0 && !(cfg.tau_list[i] < cfg.tau_list[i - 1])) throw DomainError("tau_list must be strictly decreasing");
  }
  if (cfg.reference == ErrorReference::exact) {
    const std::string& name = cfg.limit_model.empty() ? cfg.hyper_model : cfg.limit_model;
    if (!make_model(name, Grid(cfg.left, cfg.right, cfg.n), 1).has_exact_solution())
      throw DomainError(fmt::format("{} has no exact solution for an exact reference", name));
  }
  if (cfg.reference == ErrorReference::limit_numeric && cfg.limit_model.empty() && !cfg.tau_list.empty())
    throw DomainError("a numerical reference needs a limit model");
}

const std::vector<std::string>& study_families() {
  static const std::vector<std::string> f = {"bbm",          "kdv",        "kdvb", "gardner", "kawahara",
                                             "gen_kawahara", "biharmonic", "ks"};
  return f;
}

StudyConfig desk_config(const std::string& family) {
  StudyConfig c;
  c.limit_model = family + "_limit";
  c.hyper_model = family + "_hyper";
  if (!is_model_name(c.hyper_model)) throw DomainError(fmt::format("no study preset for '{}'", family));
  c.params = default_params(c.hyper_model);
  c.tau_list = {1e-2, 1e-3, 1e-4, 1e-5};
  c.T = 20.0;
  c.order = 7;
  c.dt = 0.1;
  if (family == "bbm" || family == "kdv") {
    c.left = -50.0;
    c.right = 150.0;
    c.n = 1024;
    c.initial_condition = "gaussian(2,0.02)";
    c.dt = family == "kdv" ? 0.05 : 0.01;
  } else if (family == "kdvb") {
    c.left = -150.0;
    c.right = 200.0;
    c.n = 1024;
    c.initial_condition = "front(1,25,5)";
  } else if (family == "gardner") {
    c.left = -50.0;
    c.right = 50.0;
    c.n = 256;
    c.dt = 0.05;
  } else if (family == "kawahara" || family == "gen_kawahara") {
    c.left = -70.0;
    c.right = 70.0;
    c.n = 128;
    if (family == "kawahara") c.order = 3;
  } else if (family == "biharmonic") {
    c.left = 0.0;
    c.right = 2.0 * std::numbers::pi;
    c.n = 128;
    c.order = 3;
    c.dt = 0.01;
    c.T = 1.0;
    c.initial_condition = "sine(1)";
  } else if (family == "ks") {
    c.left = -50.0;
    c.right = 50.0;
    c.n = 256;
    c.initial_condition = "gaussian(1,1)";
  }
  return c;
}

StudyConfig published_config(const std::string& family) {
  StudyConfig c = desk_config(family);
  if (family == "bbm" || family == "kdv" || family == "kdvb") c.T = 100.0;
  if (family == "bbm") c.dt = 0.1;
  if (family == "gardner") {
    c.dt = 0.01;
    c.traversals = 1.0;
  }
  if (family == "kawahara" || family == "gen_kawahara") c.traversals = 1.0;
  if (family == "biharmonic") c.n = 32;
  return c;
}

Field initial_condition(const std::string& spec, const ModelSpec& model) {
  static const std::regex call(R"(\s*([a-z_]+)\s*(?:\((.*)\))?\s*)");
  std::smatch m;
  if (!std::regex_match(spec, m, call)) throw DomainError(fmt::format("bad initial condition '{}'", spec));
  const std::string name = m[1];
  const std::vector<double> a = m[2].matched ? parse_args(m[2]) : std::vector<double>{};
  auto need = [&](std::size_t k) {
    if (a.size() != k) throw DomainError(fmt::format("initial condition {} takes {} arguments", name, k));
  };
  const Grid& g = model.grid();
  if (name == "exact") {
    need(0);
    return exact_solution_field(model, 0.0);
  }
  if (name == "gaussian") {
    need(2);
    return Field::sample(g, [&](double x) { return a[0] * std::exp(-a[1] * x * x); });
  }
  if (name == "front") {
    need(3);
    return Field::sample(g, [&](double x) { return 0.5 * a[0] * (1.0 - std::tanh((std::abs(x) - a[1]) / a[2])); });
  }
  if (name == "sine") {
    need(1);
    return Field::sample(g, [&](double x) { return std::sin(a[0] * x); });
  }
  throw DomainError(fmt::format("unknown initial condition '{}'", name));
}

std::vector<bool> pre_floor_mask(const std::vector<double>& taus, const std::vector<double>& errors,
                                 const std::vector<bool>& finite) {
  std::vector<bool> in(taus.size(), false);
  std::optional<double> prev;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!finite[i] || !(errors[i] > 0.0) || !std::isfinite(errors[i])) continue;
    if (prev && !(errors[i] <= 0.95 * *prev)) break;
    in[i] = true;
    prev = errors[i];
  }
  return in;
}

StudyResult converge_tau(const StudyConfig& cfg) {
  validate(cfg);
  if (cfg.hyper_model.empty()) throw DomainError("converge_tau needs a hyper model");
  const auto t_start = std::chrono::steady_clock::now();
  StudyResult res;
  const StepperConfig step{cfg.dt, cfg.mode};

  const ModelSpec probe = model_for(cfg, cfg.hyper_model, cfg.tau_list.empty() ? 1.0 : cfg.tau_list.front());
  const double T = final_time(cfg, probe);
  const Field u0 = initial_condition(cfg.initial_condition, probe);

  Field reference(probe.grid());
  const auto t_ref = std::chrono::steady_clock::now();
  if (cfg.reference == ErrorReference::exact) {
    const ModelSpec lim = model_for(cfg, cfg.limit_model.empty() ? cfg.hyper_model : cfg.limit_model, 1.0);
    reference = exact_solution_field(lim, T);
  } else {
    const ModelSpec lim = model_for(cfg, cfg.limit_model, 1.0);
    IntegrateOptions opts;
    opts.record_every = 0;
    reference = integrate(lim, State({u0}), T, step, opts).final_state->operator[](0);
  }
  res.reference_seconds = seconds_since(t_ref);

  const std::size_t fields = probe.field_count();
  res.rows.resize(cfg.tau_list.size());
  run_jobs(cfg.tau_list.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceRow& row = res.rows[i];
    row.tau = cfg.tau_list[i];
    row.errors.assign(fields, std::numeric_limits<double>::quiet_NaN());
    try {
      const ModelSpec model = model_for(cfg, cfg.hyper_model, row.tau);
      IntegrateOptions opts;
      opts.record_every = 0;
      const TimeSeries ts = integrate(model, init_hyperbolic(model, u0), T, step, opts);
      const State pattern = equilibrium_pattern(model, reference);
      for (std::size_t j = 0; j < fields; ++j) row.errors[j] = l2_norm((*ts.final_state)[j] - pattern[j]);
    } catch (const NumericalError& e) {
      row.finite = false;
      row.message = e.what();
    }
    row.seconds = seconds_since(t0);
  });

  std::vector<bool> finite;
  for (const ConvergenceRow& r : res.rows) finite.push_back(r.finite);
  for (std::size_t j = 0; j < fields; ++j) {
    std::vector<double> err;
    for (const ConvergenceRow& r : res.rows) err.push_back(r.errors[j]);
    std::vector<bool> mask = pre_floor_mask(cfg.tau_list, err, finite);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) {
        x.push_back(cfg.tau_list[i]);
        y.push_back(err[i]);
      }
    res.slopes.push_back(x.size() >= 2 ? std::optional<double>(loglog_slope(x, y)) : std::nullopt);
    res.in_fit.push_back(std::move(mask));
  }
  res.total_seconds = seconds_since(t_start);
  return res;
}

void write_convergence_csv(std::ostream& os, const StudyResult& r) {
  const std::size_t fields = r.slopes.size();
  os << "tau";
  for (std::size_t j = 0; j < fields; ++j) os << ",err_q" << j;
  os << '\n';
  for (const ConvergenceRow& row : r.rows) {
    os << fmt::format("{:.6e}", row.tau);
    for (double e : row.errors) os << (std::isfinite(e) ? fmt::format(",{:.6e}", e) : std::string(",nan"));
    os << '\n';
  }
  for (std::size_t j = 0; j < fields; ++j)
    os << fmt::format("# slope_q{}={}\n", j, r.slopes[j] ? fmt::format("{:.4f}", *r.slopes[j]) : "n/a");
}

std::optional<double> growth_exponent(const std::vector<double>& t, const std::vector<double>& error,
                                      double final_time, double first_traversal) {
  const double start = std::max(0.5 * final_time, first_traversal);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= start && error[i] > 0.0 && std::isfinite(error[i])) {
      x.push_back(t[i]);
      y.push_back(error[i]);
    }
  if (x.size() < 2) return std::nullopt;
  return loglog_slope(x, y);
}

GrowthReport error_growth(const StudyConfig& cfg) {
  validate(cfg);
  struct Job {
    std::string model;
    double tau;
    bool relax;
  };
  std::vector<Job> jobs;
  for (bool relax : {false, true}) {
    if (!cfg.limit_model.empty()) jobs.push_back({cfg.limit_model, 0.0, relax});
    if (!cfg.hyper_model.empty())
      for (double tau : cfg.tau_list) jobs.push_back({cfg.hyper_model, tau, relax});
  }
  GrowthReport rep;
  {
    const ModelSpec probe = model_for(cfg, jobs.front().model, 1.0);
    if (!probe.has_exact_solution() || probe.exact().speed == 0.0)
      throw DomainError(fmt::format("{} has no travelling-wave solution", probe.name()));
    rep.traversal_time = probe.traversal_time();
    rep.final_time = cfg.traversals > 0.0 ? cfg.traversals * rep.traversal_time : cfg.T;
  }
  rep.series.resize(jobs.size());
  const double sample_dt = rep.traversal_time / static_cast<double>(std::max<std::size_t>(cfg.samples_per_traversal, 1));

  run_jobs(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    GrowthSeries& s = rep.series[i];
    s.model = job.model;
    s.tau = job.tau;
    s.relaxation = job.relax;
    s.label = job.tau > 0.0 ? fmt::format("{}_tau{:.0e}_{}", job.model, job.tau, job.relax ? "relaxed" : "plain")
                            : fmt::format("{}_{}", job.model, job.relax ? "relaxed" : "plain");
    try {
      const ModelSpec model = model_for(cfg, job.model, job.tau > 0.0 ? job.tau : 1.0);
      const Field u0 = exact_solution_field(model, 0.0);
      const State q0 = init_hyperbolic(model, u0);
      IntegrateOptions opts;
      opts.record_every = 0;
      opts.relaxation.enabled = job.relax;
      opts.relaxation.weights = model.energy_weights();
      double next_sample = sample_dt;
      double prev_invariant = quadratic_invariant(q0, model.energy_weights());
      opts.observers.push_back([&](double t, const State& q, double gamma) {
        const double inv = quadratic_invariant(q, model.energy_weights());
        if (job.relax) s.max_invariant_drift = std::max(s.max_invariant_drift, std::abs(inv - prev_invariant) / prev_invariant);
        prev_invariant = inv;
        if (t + 1e-9 * sample_dt >= next_sample || t >= rep.final_time - 1e-9 * sample_dt) {
          s.t.push_back(t);
          s.error.push_back(l2_norm(q[0] - exact_solution_field(model, t)));
          s.gamma.push_back(gamma);
          while (next_sample <= t + 1e-9 * sample_dt) next_sample += sample_dt;
        }
      });
      integrate(model, q0, rep.final_time, StepperConfig{cfg.dt, cfg.mode}, opts);
    } catch (const NumericalError& e) {
      s.finite = false;
      s.message = e.what();
    }
    s.exponent = growth_exponent(s.t, s.error, rep.final_time, rep.traversal_time);
  });
  return rep;
}

void write_growth_csv(std::ostream& os, const GrowthSeries& s) {
  os << "t,error,gamma\n";
  for (std::size_t i = 0; i < s.t.size(); ++i)
    os << fmt::format("{:.10g},{:.10e},{:.17g}\n", s.t[i], s.error[i], s.gamma[i]);
}

}  // namespace hyperrelax
