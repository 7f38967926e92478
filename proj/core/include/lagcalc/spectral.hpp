#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "lagcalc/group.hpp"

namespace lagcalc {

/// Normal form of B^tau at a fixed tau != 0.
///
/// O is orthogonal with columns (sqrt2 W_1, sqrt2 U_1, ..., sqrt2 W_n, sqrt2 U_n)
/// where B^tau U_j = -mu_j W_j and B^tau W_j = mu_j U_j, so that
/// O^T B^tau O = J = diag([[0, -mu_j], [mu_j, 0]]).
struct TauFrame {
  Eigen::VectorXd tau;
  Eigen::VectorXd mu;  ///< descending, all > 0
  Eigen::MatrixXd O;
  double min_gap = 0.0;  ///< min(mu_n, spacing between distinct mu clusters)

  int n() const noexcept { return static_cast<int>(mu.size()); }
  /// The block-diagonal normal form J(tau).
  Eigen::MatrixXd J() const;
  /// Complex eigenvectors V_j = U_j + i W_j of B^tau (eigenvalue i mu_j), unit norm.
  Eigen::MatrixXcd eigenvectors() const;
};

/// Default relative degeneracy tolerance (mu_j < tol * ||B^tau||_2 is degenerate).
inline constexpr double kDefaultDegeneracyTol = 1e-8;

/// Relative tolerance under which two mu values are treated as one cluster.
inline constexpr double kClusterTol = 1e-10;

/// Normalizes B^tau. Deterministic: within each eigenspace the basis is fixed by
/// pivoted Gram-Schmidt of the projected coordinate axes, and every complex
/// eigenvector has its largest-modulus entry real and positive.
/// Throws DomainError for tau = 0 and DegenerateTau if some mu_j < tol * mu_1.
TauFrame normalize(const StepTwoGroup& g, const Eigen::VectorXd& tau,
                   double tol = kDefaultDegeneracyTol);

/// y^tau = O^T y.
Eigen::VectorXd tau_coordinates(const TauFrame& frame, const Eigen::VectorXd& y);

/// z_j = y^tau_{2j-1} + i y^tau_{2j} (1-based pairing).
Eigen::VectorXcd complex_tau_coordinates(const TauFrame& frame, const Eigen::VectorXd& y);

/// Frame at tau_new whose eigenvectors are rotated, cluster by cluster, to the
/// closest match (unitary Procrustes) with prev. Throws AmbiguousMatching if the
/// cluster structure changed or the overlap of some cluster is not dominant.
TauFrame continue_frame(const TauFrame& prev, const StepTwoGroup& g, const Eigen::VectorXd& tau_new,
                        double tol = kDefaultDegeneracyTol);

/// Eigenvalue magnitudes of B^tau (descending), without building a frame.
Eigen::VectorXd mu_values(const StepTwoGroup& g, const Eigen::VectorXd& tau);

struct ScanSample {
  Eigen::VectorXd tau;
  Eigen::VectorXd mu;
  double min_gap = 0.0;           ///< min(mu_n, min consecutive gap)
  std::vector<int> multiplicity;  ///< cluster sizes at tolerance tol * mu_1
  bool near_degenerate = false;   ///< mu_n < tol * mu_1
  bool near_crossing = false;     ///< multiplicity pattern differs from the generic one
};

struct ScanReport {
  std::vector<ScanSample> samples;
  std::vector<int> generic_multiplicity;  ///< most frequent pattern (ties: first seen)
  int degenerate_count = 0;
  int crossing_count = 0;
};

/// Numeric degeneracy and eigenvalue-crossing detector over sampled directions.
ScanReport degeneracy_scan(const StepTwoGroup& g, const std::vector<Eigen::VectorXd>& samples,
                           double tol = kDefaultDegeneracyTol);

/// Deterministic samples on S^{r-1}: the two points for r = 1, equispaced
/// angles for r = 2, a Fibonacci lattice for r = 3, and Halton points mapped
/// to R^r by x -> tan(pi (x - 1/2)) and normalized otherwise.
std::vector<Eigen::VectorXd> sphere_samples(int r, int count);

}  // namespace lagcalc
