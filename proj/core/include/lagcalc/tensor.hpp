#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lagcalc/field.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/spectral.hpp"

namespace lagcalc {

/// Truncated Laguerre tensor of a function at frequency tau.
///
/// Entry F(row, col) is the coefficient F_k^p of L~_{(p ^ k) - 1}^{(p - k)},
/// where row enumerates p in {1..K}^n and col enumerates k in {1..K}^n, both
/// lexicographically (last slot fastest). Convolution of functions becomes the
/// matrix product of their tensors.
struct LaguerreTensor {
  TauFrame frame;
  int K = 0;
  Eigen::MatrixXcd F;

  int n() const noexcept { return frame.n(); }
  /// K^n.
  std::size_t side() const noexcept { return static_cast<std::size_t>(F.rows()); }

  std::complex<double>& at(const MultiIndexPair& basis_address);
  std::complex<double> at(const MultiIndexPair& basis_address) const;
};

/// Lexicographic position of a multi-index with entries in {1..K}.
std::size_t multi_index_position(const std::vector<int>& a, int K);
/// Inverse of multi_index_position.
std::vector<int> multi_index_at(std::size_t pos, int n, int K);

LaguerreTensor zero_tensor(const TauFrame& frame, int K);
LaguerreTensor identity_tensor(const TauFrame& frame, int K);
/// Tensor with a single entry 1 at the given basis address.
LaguerreTensor indicator_tensor(const TauFrame& frame, int K, const MultiIndexPair& basis_address);

/// Squared L^2 norm (2/pi)^n prod mu_j of every exponential Laguerre function.
double basis_norm_squared(const TauFrame& frame);

/// Throws GridError unless every axis step resolves the fastest radial
/// oscillation of the retained basis functions by at least four points.
void check_grid_resolution(const std::vector<Axis>& axes, const TauFrame& frame, int K);

/// F_k^p = <f, L~> / ||L~||^2 by grid quadrature over R^{2n}.
LaguerreTensor laguerre_coefficients(const SampledField& f, const TauFrame& frame, int K);

/// sum over stored addresses of F_k^p L~_{(p ^ k) - 1}^{(p - k)}(y, tau).
std::complex<double> synthesize(const LaguerreTensor& T, const Eigen::VectorXd& y);

/// Synthesizes T on every node of the grid.
SampledField synthesize_field(const LaguerreTensor& T, const std::vector<Axis>& axes);

/// Matrix product (A B)_m^p = sum_q A_q^p B_m^q; frames and K must agree.
LaguerreTensor tensor_multiply(const LaguerreTensor& A, const LaguerreTensor& B);

/// True when two frames describe the same normal form (same tau, mu and O).
bool same_frame(const TauFrame& a, const TauFrame& b, double tol = 1e-12);

}  // namespace lagcalc
