#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hyperrelax {

/// Real-to-complex FFT of fixed length (FFTW). Forward is unnormalized,
/// inverse divides by n, so inverse(forward(u)) == u. Transforms are const
/// and may run concurrently on one instance.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t modes() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Mode angle theta_k = 2 pi k / n for k = 0..n/2.
double mode_angle(std::size_t k, std::size_t n);

using SymbolMatrixFn = std::function<Eigen::MatrixXcd(double theta)>;

/// Exact solver for block-circulant systems: for each Fourier mode the m x m
/// symbol matrix is inverted once and applied on every call.
class BlockCirculantSolver {
 public:
  /// Solves M u = r where M has symbol matrix_symbol(theta) at each mode.
  /// Throws if any mode is singular to working precision.
  BlockCirculantSolver(std::size_t n, std::size_t blocks, const SymbolMatrixFn& matrix_symbol);

  std::size_t blocks() const { return m_; }
  /// rhs and out are m blocks of n values each; they may alias.
  void solve(std::span<const std::span<const double>> rhs, std::span<const std::span<double>> out) const;
  /// Largest 1-norm condition estimate seen at construction, taken against
  /// the largest symbol norm over all modes.
  double worst_condition() const { return worst_condition_; }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<Eigen::MatrixXcd> inverses_;
  double worst_condition_ = 1.0;
  std::unique_ptr<RealFft> fft_;
};

}  // namespace hyperrelax
