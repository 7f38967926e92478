#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "lagcalc/group.hpp"
#include "lagcalc/spectral.hpp"
#include "lagcalc/tensor.hpp"

namespace lagcalc {

/// Diagonal Laguerre symbol of the sub-Laplacian (or of its inverse):
/// the raw index k in {0..K}^n (lexicographic, last slot fastest) carries
/// sum_j mu_j(tau) (2 k_j + 1), or its reciprocal when `inverse` is set.
struct SubLaplacianSymbol {
  TauFrame frame;
  int K = 0;
  bool inverse = false;
  Eigen::VectorXd diag;

  double value(const std::vector<int>& raw_k) const;
};

SubLaplacianSymbol sublap_symbol(const TauFrame& frame, int K);
SubLaplacianSymbol sublap_inverse_symbol(const SubLaplacianSymbol& S);

/// Laguerre tensor of (sub-Laplacian or inverse) applied to the function with
/// tensor T: column k of T is scaled by the symbol at raw index k - 1.
LaguerreTensor apply_symbol(const SubLaplacianSymbol& S, const LaguerreTensor& T);

/// Integrand of the fundamental-solution formula at frequency tau:
///   prod_j mu_j/sinh mu_j / (sum_j mu_j coth mu_j |z_j|^2 + i t.tau)^{n+r-1},
/// evaluated through the normal form of B^tau (tau = 0 gives the limit value).
std::complex<double> fs_integrand(const StepTwoGroup& g, const Eigen::VectorXd& tau,
                                  const Eigen::VectorXd& y, const Eigen::VectorXd& t);

/// mu / sinh(mu) and mu coth(mu), accurate for all mu >= 0.
double mu_over_sinh(double mu);
double mu_coth(double mu);

struct FsQuadrature {
  double tol = 1e-11;         ///< relative change between refinement levels
  int nodes_per_panel = 8;    ///< Gauss-Legendre nodes per unit panel at level 0
  double panel_width = 1.0;   ///< radial panel width
  int sphere_order = 8;       ///< sphere rule order at level 0 (r >= 2)
  int max_levels = 5;         ///< refinement levels (each doubles nodes and order)
  double decay_budget = 40.0; ///< radial cutoff rho_max = decay_budget / sum_j mu_j(direction)
};

struct FsResult {
  std::complex<double> value;
  double est_error = 0.0;   ///< |difference| to the previous refinement level
  double tail_bound = 0.0;  ///< bound on the truncated radial tail
  std::size_t nodes_used = 0;
  int level = 0;
};

/// Evaluates the fundamental solution of the sub-Laplacian
///   Psi(y, t) = Gamma(n+r-1)/pi^n int_{R^r} det[|B^l|/sinh|B^l|]^{1/2}
///               / (<|B^l| coth|B^l| y, y> + i t.l)^{n+r-1} dl
/// as a radial x spherical product rule. Normal forms of B^omega on the sphere
/// nodes are computed once per refinement level and reused for every point.
class FundamentalSolver {
 public:
  explicit FundamentalSolver(StepTwoGroup g, FsQuadrature q = {});

  /// Refines until successive levels agree to q.tol (relative); throws
  /// ConvergenceError otherwise and DomainError for y = 0.
  FsResult evaluate(const Eigen::VectorXd& y, const Eigen::VectorXd& t) const;
  /// Evaluation at a fixed refinement level (no convergence test).
  FsResult evaluate_at_level(const Eigen::VectorXd& y, const Eigen::VectorXd& t, int level) const;

  const StepTwoGroup& group() const noexcept { return g_; }
  const FsQuadrature& quadrature() const noexcept { return q_; }

  /// One spectral slot of a sphere direction: multiplier m and unit vector v,
  /// contributing m coth(rho m) (v.y)^2 and (rho m / sinh(rho m))^{1/2}.
  struct Slot {
    double m;
    Eigen::VectorXd v;
  };
  struct Direction {
    Eigen::VectorXd omega;
    double weight;
    double rho_max;
    std::vector<Slot> slots;
  };

  using Kernel = std::function<std::complex<double>(const Direction&, double rho,
                                                    const Eigen::VectorXd& y,
                                                    const Eigen::VectorXd& t)>;
  /// int_0^rho_max rho^{r-1} kernel drho over all directions at a level.
  std::complex<double> integrate(const Kernel& kernel, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& t, int level, std::size_t* nodes,
                                 double* tail) const;

 private:
  const std::vector<Direction>& directions(int level) const;

  StepTwoGroup g_;
  FsQuadrature q_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<std::vector<Direction>>> cache_;
};

FsResult fundamental_solution(const StepTwoGroup& g, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& t, const FsQuadrature& q = {});

/// Sub-Laplacian -1/4 sum_k Y_k^2 of F at p by fourth-order central differences
/// along the integral curves of Y_k (straight lines in these coordinates).
std::complex<double> sublaplacian_fd(
    const StepTwoGroup& g,
    const std::function<std::complex<double>(const Eigen::VectorXd&, const Eigen::VectorXd&)>& F,
    const GroupPoint& p, double h);

/// max |Delta_b Psi| over the points. Requires |y| >= 10 h at every point.
double harmonicity_check(const FundamentalSolver& solver, const std::vector<GroupPoint>& points,
                         double h);

namespace detail {

/// Dense matrix-function form of fs_integrand: eigendecomposition of
/// (B^tau)^T B^tau with scalar sinh/coth on its eigenvalues.
std::complex<double> fs_integrand_dense(const StepTwoGroup& g, const Eigen::VectorXd& tau,
                                        const Eigen::VectorXd& y, const Eigen::VectorXd& t);

/// Abel-regularized kernel Psi_R(y, t) for 0 < R < 1:
///   2^n Gamma(n+r-1)/pi^n int det|B^l|^{1/2} / C(l; R) / (|l| B(y, l; R) + i t.l)^{n+r-1} dl,
///   C(l; R) = prod_j (e^{mu_j} - e^{-mu_j} R),
///   |l| B(y, l; R) = sum_j mu_j |z_j|^2 (1 + e^{-2 mu_j} R) / (1 - e^{-2 mu_j} R).
/// It tends to Psi as R -> 1-.
std::complex<double> psi_R(const FundamentalSolver& solver, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& t, double R, int level);

}  // namespace detail

/// Matrices attached to the k-Cauchy-Fueter sub-Laplacian at frequency tau on
/// the quaternionic Heisenberg group.
struct SzegoData {
  int k = 0;
  Eigen::VectorXd M;     ///< diagonal of M_k: (1, 2, ..., 2, 1)
  Eigen::MatrixXcd D;    ///< D_k^tau, tridiagonal
  Eigen::VectorXcd e1;   ///< unit null vector of |tau| M_k + i D_k^tau
  Eigen::MatrixXcd P;    ///< e1 e1^*
  double gamma = 0.0;    ///< normalizing constant of the closed formula for e1

  /// |tau| M_k + i D_k^tau.
  Eigen::MatrixXcd hermitian_form(const Eigen::VectorXd& tau) const;
};

SzegoData szego_data(int k, const Eigen::VectorXd& tau);

/// 16 Gamma(5) / (2 pi)^5 = 2^7 3 / (2 pi)^5.
double szego_constant();

/// S(y, s) = 2^7 3/(2 pi)^5 int_{S^2} P^tau / (|y|^2 - i tau.s)^5 dtau by a
/// Gauss-Legendre x uniform sphere rule of the given order.
Eigen::MatrixXcd szego_kernel(int k, const Eigen::VectorXd& y, const Eigen::VectorXd& s,
                              int sphere_order = 32);

}  // namespace lagcalc
