#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hyperrelax/imex.hpp"
#include "hyperrelax/models.hpp"

namespace hyperrelax {

enum class ErrorReference { limit_numeric, exact };

struct StudyConfig {
  std::string limit_model;
  std::string hyper_model;
  /// Model constants; tau is overwritten per run.
  Params params;
  double left = 0.0;
  double right = 1.0;
  std::size_t n = 128;
  int order = 7;
  double dt = 0.1;
  /// Final time; ignored by error_growth when traversals > 0.
  double T = 1.0;
  StepMode mode = StepMode::imex;
  /// gaussian(A,B), front(A,C,W), sine(K) or exact.
  std::string initial_condition = "exact";
  std::vector<double> tau_list;
  bool relaxation = false;
  ErrorReference reference = ErrorReference::limit_numeric;
  double traversals = 0.0;
  std::size_t samples_per_traversal = 20;
  std::string output_dir = ".";
  std::vector<std::string> formats = {"csv"};
};

/// Throws DomainError if the configuration is inconsistent.
void validate(const StudyConfig& cfg);

/// Reduced settings that fit a few minutes per model on one core.
StudyConfig desk_config(const std::string& family);
/// Settings as published, including the long final times.
StudyConfig published_config(const std::string& family);
/// Families accepted by desk_config and published_config.
const std::vector<std::string>& study_families();

Field initial_condition(const std::string& spec, const ModelSpec& model);

/// HYPERRELAX_THREADS if set and positive, else the hardware concurrency.
std::size_t job_threads();

struct ConvergenceRow {
  double tau = 0.0;
  std::vector<double> errors;
  bool finite = true;
  std::string message;
  double seconds = 0.0;
};

struct StudyResult {
  std::vector<ConvergenceRow> rows;
  /// in_fit[j][i]: row i enters the slope fit of component j.
  std::vector<std::vector<bool>> in_fit;
  std::vector<std::optional<double>> slopes;
  double reference_seconds = 0.0;
  double total_seconds = 0.0;
};

/// Rows enter while each improves on the previous by at least 5%.
std::vector<bool> pre_floor_mask(const std::vector<double>& taus, const std::vector<double>& errors,
                                 const std::vector<bool>& finite);

StudyResult converge_tau(const StudyConfig& cfg);

void write_convergence_csv(std::ostream& os, const StudyResult& r);

struct GrowthSeries {
  std::string label;
  std::string model;
  double tau = 0.0;  // 0 for the limit model
  bool relaxation = false;
  std::vector<double> t;
  std::vector<double> error;
  std::vector<double> gamma;
  std::optional<double> exponent;
  /// Largest relative change of the quadratic invariant over one step.
  double max_invariant_drift = 0.0;
  bool finite = true;
  std::string message;
};

struct GrowthReport {
  double traversal_time = 0.0;
  double final_time = 0.0;
  std::vector<GrowthSeries> series;
};

/// Least-squares exponent of log error against log t over the samples with
/// t >= max(final_time / 2, first_traversal).
std::optional<double> growth_exponent(const std::vector<double>& t, const std::vector<double>& error,
                                      double final_time, double first_traversal);

/// Runs the limit model (if named) and the hyper model for every tau, each
/// with relaxation off and on, against the exact travelling wave.
GrowthReport error_growth(const StudyConfig& cfg);

void write_growth_csv(std::ostream& os, const GrowthSeries& s);

}  // namespace hyperrelax
