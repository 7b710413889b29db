#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hyperrelax/config.hpp"
#include "hyperrelax/output.hpp"
#include "hyperrelax/residual.hpp"
#include "hyperrelax/sbp.hpp"
#include "hyperrelax/study.hpp"

namespace hyperrelax {

namespace {

namespace fs = std::filesystem;

bool wants(const StudyConfig& c, const std::string& format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

std::string family_of_model(const std::string& name) {
  const auto pos = name.rfind('_');
  return pos == std::string::npos ? name : name.substr(0, pos);
}

/// Preset for a single model: the family's desk settings when one exists,
/// otherwise a smooth periodic problem on [0, 2 pi].
StudyConfig base_for_model(const std::string& model) {
  if (!is_model_name(model)) throw ConfigError(fmt::format("unknown model '{}'", model));
  const std::string fam = family_of_model(model);
  const auto& fams = study_families();
  StudyConfig c;
  if (std::find(fams.begin(), fams.end(), fam) != fams.end()) {
    c = desk_config(fam);
  } else {
    c.left = 0.0;
    c.right = 2.0 * std::numbers::pi;
    c.n = 128;
    c.order = 7;
    c.dt = 0.01;
    c.T = 1.0;
    c.initial_condition = "sine(1)";
    c.tau_list = {1e-3};
    c.limit_model.clear();
  }
  c.hyper_model = model;
  c.params = default_params(model);
  return c;
}

struct RunArgs {
  std::string config, model, initial, mode, out;
  std::optional<double> T, dt, tau, left, right, mu;
  std::optional<std::size_t> n, record_every;
  std::optional<int> order;
  bool relaxation = false;
  bool svg = false;
};

int do_run(const RunArgs& a, std::ostream& out) {
  StudyConfig c;
  std::string model = a.model;
  if (!a.config.empty()) {
    c = load_study_config(a.config);
    if (model.empty()) model = c.hyper_model.empty() ? c.limit_model : c.hyper_model;
    if (model != c.hyper_model) c.params = default_params(model);
  } else {
    if (model.empty()) throw ConfigError("run needs --model or --config");
    c = base_for_model(model);
  }
  if (!is_model_name(model)) throw ConfigError(fmt::format("unknown model '{}'", model));
  if (a.T) {
    c.T = *a.T;
    c.traversals = 0.0;
  }
  if (a.dt) c.dt = *a.dt;
  if (a.left) c.left = *a.left;
  if (a.right) c.right = *a.right;
  if (a.n) c.n = *a.n;
  if (a.order) c.order = *a.order;
  if (a.mu) c.params.mu = *a.mu;
  if (!a.initial.empty()) c.initial_condition = a.initial;
  if (!a.mode.empty()) {
    if (a.mode == "imex") c.mode = StepMode::imex;
    else if (a.mode == "explicit") c.mode = StepMode::explicit_only;
    else throw ConfigError("--mode must be imex or explicit");
  }
  if (a.relaxation) c.relaxation = true;
  if (!a.out.empty()) c.output_dir = a.out;
  if (a.svg && !wants(c, "svg")) c.formats.push_back("svg");
  Params p = c.params;
  p.tau = a.tau ? *a.tau : (c.tau_list.empty() ? p.tau : c.tau_list.front());
  if (!(p.tau > 0.0)) throw ConfigError("tau must be positive");

  ModelSpec spec = [&] {
    try {
      return make_model(model, Grid(c.left, c.right, c.n), c.order, p);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }();
  const double T = c.traversals > 0.0 ? c.traversals * spec.traversal_time() : c.T;
  if (!(T > 0.0) || !(c.dt > 0.0)) throw ConfigError("T and dt must be positive");
  const Field u0 = [&] {
    try {
      return initial_condition(c.initial_condition, spec);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }();
  IntegrateOptions opts;
  opts.record_every = a.record_every ? *a.record_every : std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(T / c.dt / 200.0)));
  opts.relaxation.enabled = c.relaxation;
  opts.relaxation.weights = spec.energy_weights();
  const TimeSeries ts = integrate(spec, init_hyperbolic(spec, u0), T, StepperConfig{c.dt, c.mode}, opts);

  const fs::path dir = c.output_dir;
  ensure_directory(dir);
  write_file(dir / "final_state.csv", [&](std::ostream& os) { write_state_csv(os, *ts.final_state); });
  write_file(dir / "timeseries.csv", [&](std::ostream& os) { ts.write_csv(os); });
  const Field& q0 = (*ts.final_state)[0];
  if (wants(c, "svg")) {
    const auto nodes = spec.grid().nodes();
    write_file(dir / "final_q0.svg", [&](std::ostream& os) {
      write_svg_line_plot(os, std::vector<double>(nodes.begin(), nodes.end()), q0.values,
                          {fmt::format("{} at t = {:.6g}", model, ts.final_time), "x", "q0"});
    });
  }
  out << fmt::format("model {} (tau = {:g}), n = {}, order {}, dt = {:g}\n", model, p.tau, c.n, c.order, c.dt);
  out << fmt::format("steps {}, final time {:.10g}\n", ts.steps, ts.final_time);
  out << fmt::format("mass(q0) = {:.12e}, energy = {:.12e}\n", mass(q0), energy(spec, *ts.final_state));
  if (spec.has_exact_solution())
    out << fmt::format("L2 error vs exact solution: {:.6e}\n", l2_norm(q0 - exact_solution_field(spec, ts.final_time)));
  out << fmt::format("wrote {}\n", (dir / "final_state.csv").string());
  return 0;
}

StudyConfig study_from(const std::string& config, const std::string& family, bool published, const std::string& outdir) {
  StudyConfig c;
  if (!config.empty()) {
    c = load_study_config(config);
  } else {
    if (family.empty()) throw ConfigError("need --config or --family");
    try {
      c = published ? published_config(family) : desk_config(family);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (!outdir.empty()) c.output_dir = outdir;
  return c;
}

int do_converge(const StudyConfig& c, std::ostream& out) {
  const StudyResult r = converge_tau(c);
  const fs::path dir = c.output_dir;
  ensure_directory(dir);
  write_file(dir / "convergence.csv", [&](std::ostream& os) { write_convergence_csv(os, r); });
  if (wants(c, "svg")) {
    std::vector<double> tau, err;
    for (const ConvergenceRow& row : r.rows) {
      tau.push_back(row.tau);
      err.push_back(row.errors.empty() ? NAN : row.errors[0]);
    }
    write_file(dir / "convergence_q0.svg", [&](std::ostream& os) {
      write_svg_line_plot(os, tau, err, {c.hyper_model + ": L2 error of q0 at T", "tau", "error", true, true});
    });
  }
  write_convergence_csv(out, r);
  bool ok = true;
  for (const ConvergenceRow& row : r.rows)
    if (!row.finite) {
      out << fmt::format("tau = {:g} failed: {}\n", row.tau, row.message);
      ok = false;
    }
  return ok ? 0 : 1;
}

int do_growth(const StudyConfig& c, std::ostream& out) {
  const GrowthReport r = error_growth(c);
  const fs::path dir = c.output_dir;
  ensure_directory(dir);
  bool ok = true;
  out << fmt::format("traversal time {:.6f}, final time {:.6f}\n", r.traversal_time, r.final_time);
  for (const GrowthSeries& s : r.series) {
    write_file(dir / fmt::format("growth_{}.csv", s.label), [&](std::ostream& os) { write_growth_csv(os, s); });
    if (wants(c, "svg"))
      write_file(dir / fmt::format("growth_{}.svg", s.label), [&](std::ostream& os) {
        write_svg_line_plot(os, s.t, s.error, {s.label, "t", "L2 error of q0", true, true});
      });
    out << fmt::format("{:45s} exponent {}  max invariant drift {}{}\n", s.label,
                       s.exponent ? fmt::format("{:.3f}", *s.exponent) : "n/a",
                       s.relaxation ? fmt::format("{:.2e}", s.max_invariant_drift) : "n/a",
                       s.finite ? "" : "  FAILED: " + s.message);
    ok = ok && s.finite;
  }
  return ok ? 0 : 1;
}

BarSpec parse_kind_spec(const std::string& s, double mu, int sigma0) {
  const auto colon = s.find(':');
  BarSpec b;
  b.kind = parse_bar_kind(s.substr(0, colon));
  b.mu = mu;
  b.sigma0 = sigma0;
  if (colon != std::string::npos) {
    try {
      b.m = std::stoi(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("bad kind '{}'", s));
    }
  } else if (b.kind == BarKind::odd_m || b.kind == BarKind::even_m) {
    b.m = b.kind == BarKind::odd_m ? 3 : 4;
  }
  build_bar_construction(b);
  return b;
}

int do_residuals(const std::vector<std::string>& kinds, std::size_t profiles, const std::vector<double>& taus,
                 double mu, int sigma0, const std::string& outdir, std::ostream& out) {
  std::vector<BarSpec> specs;
  try {
    for (const std::string& k : kinds) specs.push_back(parse_kind_spec(k, mu, sigma0));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  for (double t : taus)
    if (!(t > 0.0)) throw ConfigError("tau values must be positive");
  std::vector<IdentityReport> reports;
  const auto points = random_points(20, 7);
  bool ok = true;
  for (const BarSpec& s : specs) {
    for (double tau : taus)
      for (std::size_t p = 0; p < profiles; ++p) {
        reports.push_back(verify_identities(construct_bar_q(s, SmoothProfile::random_trig(1000 + p), tau), points));
        ok = ok && reports.back().pass;
      }
  }
  std::ostringstream csv;
  write_identity_csv(csv, reports);
  const std::vector<double> scaling_taus = {1e-2, 1e-3, 1e-4, 1e-5};
  std::ostringstream sc;
  sc << "kind,m,component,slope\n";
  for (const BarSpec& s : specs) {
    const ScalingReport r = scaling_study(s, SmoothProfile::random_trig(1), scaling_taus, points);
    const bool generic = s.kind == BarKind::odd_m || s.kind == BarKind::even_m;
    const std::string m = generic ? std::to_string(s.m) : "-";
    for (std::size_t j = 0; j < r.slopes.size(); ++j)
      sc << fmt::format("{},{},q{},{}\n", to_string(s.kind), m, j,
                        r.slopes[j] ? fmt::format("{:.4f}", *r.slopes[j]) : "exact");
    sc << fmt::format("{},{},tauR,{}\n", to_string(s.kind), m,
                      r.residual_slope ? fmt::format("{:.4f}", *r.residual_slope) : "exact");
  }
  const fs::path dir = outdir.empty() ? fs::path(".") : fs::path(outdir);
  ensure_directory(dir);
  write_file(dir / "residual_report.csv", [&](std::ostream& os) { os << csv.str(); });
  write_file(dir / "residual_scaling.csv", [&](std::ostream& os) { os << sc.str(); });
  std::istringstream lines(csv.str());
  for (std::string line; std::getline(lines, line);)
    if (line.starts_with("#")) out << line << '\n';
  out << sc.str();
  return ok ? 0 : 1;
}

int do_check_operators(int order, std::size_t n, std::ostream& out) {
  const OperatorAudit a = [&] {
    try {
      return audit_operators(order, n);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }();
  const bool adj = a.adjoint_defect <= 1e-12, skew = a.skew_defect <= 1e-12;
  const bool diss = a.max_symbol_real <= 1e-12 && a.max_quadratic_form <= 1e-12;
  const bool acc = std::abs(a.observed_order - order) <= 0.25;
  out << fmt::format("upwind SBP operators, order {}, n = {}\n", order, n);
  out << fmt::format("  adjoint  <D+f,g> + <f,D-g>   {:.3e}  {}\n", a.adjoint_defect, adj ? "ok" : "FAIL");
  out << fmt::format("  skew     <f,D1 f>            {:.3e}  {}\n", a.skew_defect, skew ? "ok" : "FAIL");
  out << fmt::format("  dissipative  max Re symbol   {:.3e}, max <f,(D+ - D-)f> {:.3e}  {}\n", a.max_symbol_real,
                     a.max_quadratic_form, diss ? "ok" : "FAIL");
  out << fmt::format("  accuracy observed order      {:.3f}  {}\n", a.observed_order, acc ? "ok" : "FAIL");
  return adj && skew && diss && acc ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperbolic approximations of higher-order PDEs: simulations, studies and checks", "hyperrelax"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Integrate one model and write the final state");
  run->add_option("--config", ra.config, "Study TOML file");
  run->add_option("--model", ra.model, "Registered model name");
  run->add_option("--T", ra.T, "Final time");
  run->add_option("--dt", ra.dt, "Time step");
  run->add_option("--tau", ra.tau, "Relaxation parameter");
  run->add_option("--n", ra.n, "Grid points");
  run->add_option("--left", ra.left, "Left end of the domain");
  run->add_option("--right", ra.right, "Right end of the domain");
  run->add_option("--order", ra.order, "Operator order");
  run->add_option("--mu", ra.mu, "Damping coefficient");
  run->add_option("--initial", ra.initial, "gaussian(A,B), front(A,C,W), sine(K) or exact");
  run->add_option("--mode", ra.mode, "imex or explicit");
  run->add_option("--record-every", ra.record_every, "Diagnostics row every k steps");
  run->add_flag("--relaxation", ra.relaxation, "Relax every step onto the quadratic invariant");
  run->add_flag("--svg", ra.svg, "Also write an SVG plot of q0");
  run->add_option("--out", ra.out, "Output directory");

  std::string cfg_path, family, outdir;
  bool published = false;
  auto* conv = app.add_subcommand("converge-tau", "Error at T against tau for a hyperbolization");
  auto* growth = app.add_subcommand("error-growth", "Error growth of a travelling wave with and without relaxation");
  for (CLI::App* sc : {conv, growth}) {
    sc->add_option("--config", cfg_path, "Study TOML file");
    sc->add_option("--family", family, "Preset family (bbm, kdv, kdvb, gardner, kawahara, gen_kawahara, biharmonic, ks)");
    sc->add_flag("--published", published, "Use the published settings instead of the desk preset");
    sc->add_option("--out", outdir, "Output directory");
  }

  std::vector<std::string> kinds = {"mixed", "odd_m:3", "odd_m:5", "even_m:4", "kawahara", "ks"};
  std::size_t profiles = 50;
  std::vector<double> taus = {1e-1, 1e-2, 1e-3};
  double mu = 0.0;
  int sigma0 = 1;
  std::string res_out;
  auto* res = app.add_subcommand("verify-residuals", "Check the lifted approximate solutions");
  res->add_option("--kinds", kinds, "Kinds: mixed, odd_m:M, even_m:M, kawahara, ks");
  res->add_option("--profiles", profiles, "Random trigonometric profiles per kind and tau");
  res->add_option("--tau", taus, "tau values");
  res->add_option("--mu", mu, "Damping for odd_m");
  res->add_option("--sigma0", sigma0, "Leading sign for odd_m");
  res->add_option("--out", res_out, "Output directory");

  int order = 7;
  std::size_t n = 256;
  auto* ops = app.add_subcommand("check-operators", "Audit the upwind SBP operators");
  ops->add_option("--order", order, "Operator order");
  ops->add_option("--n", n, "Grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*run) return do_run(ra, out);
    if (*conv) return do_converge(study_from(cfg_path, family, published, outdir), out);
    if (*growth) {
      StudyConfig c = study_from(cfg_path, family.empty() && cfg_path.empty() ? "gen_kawahara" : family, published, outdir);
      if (cfg_path.empty()) {
        c.n = 512;
        c.traversals = published ? 10.0 : 3.0;
        c.tau_list = {1e-3, 1e-4, 1e-5};
      }
      return do_growth(c, out);
    }
    if (*res) return do_residuals(kinds, profiles, taus, mu, sigma0, res_out, out);
    if (*ops) return do_check_operators(order, n, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hyperrelax
