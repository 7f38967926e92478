#pragma once

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lagcalc/spectral.hpp"

namespace lagcalc {

/// Generalized Laguerre polynomial L_k^{(p)}(sigma) by upward three-term recurrence.
double laguerre_poly(int k, int p, double sigma);

/// Normalized Laguerre function
///   l_k^{(p)}(sigma) = [k! / (k+p)!]^{1/2} L_k^{(p)}(sigma) sigma^{p/2} e^{-sigma/2},
/// orthonormal in L^2([0, inf)) for fixed p.
double laguerre_l(int k, int p, double sigma);

/// Two-dimensional exponential Laguerre function at frequency magnitude tau_mag:
///   (2 tau/pi) (sgn p)^p l_k^{(|p|)}(2 tau |y|^2) e^{i p theta},   y = |y| e^{i theta},
/// with sgn 0 = +1.
std::complex<double> exp_laguerre_2d(int k, int p, double y1, double y2, double tau_mag);

/// Address of an exponential Laguerre basis element.
///
/// Basis mode: p, k in Z_+^n (entries >= 1) address L~_{(p ^ k) - 1}^{(p - k)}.
/// Raw mode:   k in Z_{>=0}^n and p in Z^n address L~_k^{(p)} directly.
struct MultiIndexPair {
  enum class Mode { Basis, Raw };

  Mode mode = Mode::Raw;
  std::vector<int> p;
  std::vector<int> k;

  static MultiIndexPair basis(std::vector<int> p, std::vector<int> k);
  static MultiIndexPair raw(std::vector<int> k, std::vector<int> p);

  int n() const noexcept { return static_cast<int>(k.size()); }
  /// Throws DomainError if the entries violate the mode's constraints.
  void validate() const;
  /// The equivalent raw address.
  MultiIndexPair to_raw() const;

  bool operator==(const MultiIndexPair&) const = default;
};

/// Product of two-dimensional exponential Laguerre functions over the complex
/// tau-coordinates of y:
///   prod_j (2 mu_j/pi) (sgn p_j)^{p_j} l_{k_j}^{(|p_j|)}(2 mu_j |z_j|^2) e^{i p_j theta_j}.
std::complex<double> exp_laguerre(const TauFrame& frame, const MultiIndexPair& idx,
                                  const Eigen::VectorXd& y);

/// Same as exp_laguerre with the complex tau-coordinates already computed.
std::complex<double> exp_laguerre_z(const Eigen::VectorXd& mu, const MultiIndexPair& raw_idx,
                                    const Eigen::VectorXcd& z);

/// Complex horizontal fields in slot j:
///   Z_j    = d/dz_j    - mu_j conj(z_j)
///   Zbar_j = d/dzbar_j + mu_j z_j
/// with d/dz = (d/dx - i d/dy)/2 in tau-coordinates.
enum class ShiftOp { Z, Zbar };

struct Shifted {
  double coefficient;
  MultiIndexPair index;  ///< raw mode
};

struct Annihilated {};

using ShiftResult = std::variant<Shifted, Annihilated>;

/// Exact action of Z_j or Zbar_j (j 0-based) on L~_k^{(p)}: the result is
/// coefficient * L~ at the shifted raw index, or Annihilated.
ShiftResult shift_apply(const TauFrame& frame, ShiftOp which, int j, const MultiIndexPair& idx);

/// Same as shift_apply with only the slot's mu_j(tau) supplied.
ShiftResult shift_apply_mu(double mu_j, ShiftOp which, int j, const MultiIndexPair& idx);

}  // namespace lagcalc
