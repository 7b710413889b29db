#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "hyperrelax/grid.hpp"

namespace hyperrelax {

/// Periodic difference operator (Au)_i = sum_j coeffs[j] * u[(i + offsets[j]) mod n].
/// Coefficients already contain the 1/h scaling.
class CirculantOperator {
 public:
  CirculantOperator(const Grid& grid, std::vector<int> offsets, std::vector<double> coeffs);

  const Grid& grid() const { return grid_; }
  const std::vector<int>& offsets() const { return offsets_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int width() const;

  Field apply(const Field& f) const;
  /// out = A f; out must not alias f.
  void apply_into(std::span<const double> f, std::span<double> out) const;

  std::complex<double> symbol(double theta) const;

  /// Negated transpose: offsets -k with negated weights.
  CirculantOperator negated_transpose() const;
  /// Single stencil for the product this * other.
  CirculantOperator compose(const CirculantOperator& other) const;
  CirculantOperator scaled(double a) const;
  friend CirculantOperator operator+(const CirculantOperator& a, const CirculantOperator& b);
  friend CirculantOperator operator-(const CirculantOperator& a, const CirculantOperator& b);

 private:
  Grid grid_;
  std::vector<int> offsets_;
  std::vector<double> coeffs_;
};

Field apply(const CirculantOperator& op, const Field& f);
std::complex<double> fourier_symbol(const CirculantOperator& op, double theta);

enum class Diff { plus, minus, central };

/// Upwind pair D+, D- = -D+^T and the central operator D1 = (D+ + D-)/2.
struct OperatorSet {
  int order;
  CirculantOperator dplus;
  CirculantOperator dminus;
  CirculantOperator dcentral;

  const Grid& grid() const { return dplus.grid(); }
  const CirculantOperator& get(Diff d) const;
};

constexpr int kMaxUpwindOrder = 7;

/// Minimal-width biased D+ stencil of order p on unit spacing. Odd p = 2r-1
/// uses offsets -(r-1)..r, even p = 2r uses -(r-1)..r+1.
struct UnitStencil {
  std::vector<int> offsets;
  std::vector<double> weights;
};
UnitStencil upwind_unit_stencil(int order);

OperatorSet build_upwind_pair(int order, const Grid& grid);

/// Plain-text dump: order, then one line per operator with offsets and the
/// h-free (multiplied by h) coefficients.
void dump_operator_set(std::ostream& os, const OperatorSet& ops);

struct OperatorAudit {
  double adjoint_defect = 0;      // max relative |<D+f,g> + <f,D-g>|
  double skew_defect = 0;         // max relative |<f,D1 f>|
  double max_symbol_real = 0;     // max over theta of Re(symbol(D+)) * h
  double max_quadratic_form = 0;  // max relative <f,(D+ - D-) f>
  double observed_order = 0;      // refinement slope on sin(x)
  std::vector<double> refinement_errors;
};

/// Property audit on random fields (grid of n points) and a theta grid.
/// The accuracy slope comes from D+ applied to sin(x) on [0, 2 pi] with
/// n = 16, 32, 64, 128, independent of n.
OperatorAudit audit_operators(int order, std::size_t n, std::size_t random_trials = 20,
                              std::size_t theta_samples = 10000, unsigned seed = 1234);

}  // namespace hyperrelax
