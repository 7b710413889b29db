#include "hyperrelax/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>
#include <fmt/format.h>

namespace hyperrelax {

namespace {
// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  std::lock_guard lock(planner_mutex());
  impl_->real = fftw_alloc_real(n);
  impl_->spec = fftw_alloc_complex(n / 2 + 1);
  const int ni = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_r2c_1d(ni, impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_1d(ni, impl_->spec, impl_->real, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->inv) throw std::runtime_error("FFTW planning failed");
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

namespace {
struct FftBuffers {
  double* real;
  fftw_complex* spec;
  explicit FftBuffers(std::size_t n) : real(fftw_alloc_real(n)), spec(fftw_alloc_complex(n / 2 + 1)) {}
  ~FftBuffers() {
    fftw_free(real);
    fftw_free(spec);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;
};
}  // namespace

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  FftBuffers b(n_);
  std::copy(in.begin(), in.end(), b.real);
  fftw_execute_dft_r2c(impl_->fwd, b.real, b.spec);
  for (std::size_t k = 0; k < modes(); ++k) out[k] = {b.spec[k][0], b.spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  FftBuffers b(n_);
  for (std::size_t k = 0; k < modes(); ++k) {
    b.spec[k][0] = in[k].real();
    b.spec[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(impl_->inv, b.spec, b.real);
  const double s = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = b.real[i] * s;
}

double mode_angle(std::size_t k, std::size_t n) {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
}

BlockCirculantSolver::BlockCirculantSolver(std::size_t n, std::size_t blocks, const SymbolMatrixFn& matrix_symbol)
    : n_(n), m_(blocks), fft_(std::make_unique<RealFft>(n)) {
  const std::size_t modes = n / 2 + 1;
  inverses_.reserve(modes);
  std::vector<Eigen::MatrixXcd> symbols;
  symbols.reserve(modes);
  double scale = 0.0;
  for (std::size_t k = 0; k < modes; ++k) {
    symbols.push_back(matrix_symbol(mode_angle(k, n)));
    const Eigen::MatrixXcd& M = symbols.back();
    if (static_cast<std::size_t>(M.rows()) != m_ || static_cast<std::size_t>(M.cols()) != m_)
      throw std::invalid_argument("BlockCirculantSolver: symbol matrix has wrong shape");
    scale = std::max(scale, M.cwiseAbs().colwise().sum().maxCoeff());
  }
  for (std::size_t k = 0; k < modes; ++k) {
    const Eigen::MatrixXcd& M = symbols[k];
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    const double det = std::abs(lu.determinant());
    if (!(det > 0.0) || !std::isfinite(det))
      throw std::runtime_error(fmt::format("singular block-circulant system at mode {}", k));
    Eigen::MatrixXcd inv = lu.inverse();
    // Conditioning is measured against the largest symbol over all modes.
    const double cond = scale * inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(cond) || cond > 1e15)
      throw std::runtime_error(fmt::format("ill-conditioned block-circulant system at mode {} (cond {:.3g})", k, cond));
    worst_condition_ = std::max(worst_condition_, cond);
    inverses_.push_back(std::move(inv));
  }
}

void BlockCirculantSolver::solve(std::span<const std::span<const double>> rhs,
                                 std::span<const std::span<double>> out) const {
  if (rhs.size() != m_ || out.size() != m_) throw std::invalid_argument("BlockCirculantSolver: block count mismatch");
  const std::size_t modes = n_ / 2 + 1;
  std::vector<std::vector<std::complex<double>>> work(m_, std::vector<std::complex<double>>(modes));
  for (std::size_t b = 0; b < m_; ++b) fft_->forward(rhs[b], work[b]);
  Eigen::VectorXcd v(m_), w(m_);
  for (std::size_t k = 0; k < modes; ++k) {
    for (std::size_t b = 0; b < m_; ++b) v[b] = work[b][k];
    w.noalias() = inverses_[k] * v;
    for (std::size_t b = 0; b < m_; ++b) work[b][k] = w[b];
  }
  for (std::size_t b = 0; b < m_; ++b) fft_->inverse(work[b], out[b]);
}

}  // namespace hyperrelax
