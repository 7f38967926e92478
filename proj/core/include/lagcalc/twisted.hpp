#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "lagcalc/field.hpp"
#include "lagcalc/group.hpp"
#include "lagcalc/quadrature.hpp"
#include "lagcalc/spectral.hpp"

namespace lagcalc {

/// f(y, t) on the group, y in R^{2n}, t in R^r.
using GroupFunction =
    std::function<std::complex<double>(const Eigen::VectorXd& y, const Eigen::VectorXd& t)>;
/// Euclidean Fourier transform fhat(xi, tau) = int e^{-i(y xi + t tau)} f(y, t) dy dt.
using FourierFunction =
    std::function<std::complex<double>(const Eigen::VectorXd& xi, const Eigen::VectorXd& tau)>;

/// Partial Fourier transform in the central variables,
///   f~_tau(y) = int e^{-i tau . s} f(y, s) ds,
/// by the trapezoid rule along the last r axes of f. Throws GridError when some
/// |tau_beta| exceeds the Nyquist frequency pi / h_beta of its axis.
SampledField partial_fourier(const SampledField& f, const StepTwoGroup& g,
                             const Eigen::VectorXd& tau);

/// Twisted convolution with an explicit skew matrix Bt = B^tau:
///   (f *_tau h)(y) = int e^{-2i y^T Bt x} f(y - x) h(x) dx,
/// evaluated at the grid nodes listed in `nodes` (flat indices). Both fields
/// must share a grid whose nodes form a lattice containing the origin
/// (min / step integral on every axis); values off the grid are zero.
std::vector<std::complex<double>> twisted_convolve_nodes(const SampledField& f,
                                                         const SampledField& h,
                                                         const Eigen::MatrixXd& Bt,
                                                         const std::vector<std::size_t>& nodes);

/// Twisted convolution at frequency tau on every grid node (tau = 0 gives the
/// Euclidean convolution).
SampledField twisted_convolve(const SampledField& f, const SampledField& h, const StepTwoGroup& g,
                              const Eigen::VectorXd& tau);
std::vector<std::complex<double>> twisted_convolve_at(const SampledField& f, const SampledField& h,
                                                      const StepTwoGroup& g,
                                                      const Eigen::VectorXd& tau,
                                                      const std::vector<std::size_t>& nodes);

/// Frequency-side evaluation of f *_tau h at the listed nodes:
/// (2 pi)^{-2n} int e^{i y.eta} fhat(eta) hhat(eta - 2 B^tau y) d eta, with both transforms
/// taken by separable direct sums on the grid and eta on the reciprocal lattice of one
/// period. Cost grows like N^{2n+1} per output node, so this is a desk-scale cross-check.
std::vector<std::complex<double>> twisted_convolve_fourier_at(const SampledField& f,
                                                              const SampledField& h,
                                                              const StepTwoGroup& g,
                                                              const Eigen::VectorXd& tau,
                                                              const std::vector<std::size_t>& nodes);

/// One complex slot in normal form: phase e^{-2i tau (-y1 x2 + y2 x1)}.
SampledField twisted_convolve_1d(const SampledField& f, const SampledField& h, double tau);
std::vector<std::complex<double>> twisted_convolve_1d_at(const SampledField& f,
                                                         const SampledField& h, double tau,
                                                         const std::vector<std::size_t>& nodes);
/// The skew matrix of twisted_convolve_1d.
Eigen::MatrixXd normal_form_1d(double tau);

/// Group convolution
///   (phi * psi)(y, s) = int phi(x, t) psi((x, t)^{-1} (y, s)) dx dt
/// by a tensor-product rule (one rule per axis of R^{2n+r}) at each point.
std::vector<std::complex<double>> group_convolve(const GroupFunction& phi, const GroupFunction& psi,
                                                 const StepTwoGroup& g,
                                                 const std::vector<Rule1D>& rules,
                                                 const std::vector<GroupPoint>& points);

/// Field form: the grid nodes of phi are the quadrature nodes and psi is
/// evaluated by cubic interpolation (zero outside its grid). Desk-scale only.
SampledField group_convolve(const SampledField& phi, const SampledField& psi,
                            const StepTwoGroup& g);

/// The shifted frequency T_y(xi) = xi - 2 (B^tau)^T y = xi + 2 B^tau y.
Eigen::VectorXd shifted_frequency(const StepTwoGroup& g, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& xi, const Eigen::VectorXd& tau);

/// Fourier-side group convolution
///   (phi * psi)(y, t) = (2 pi)^{-(2n+r)} int e^{i(t tau + y xi)} phihat(T_y xi, tau) psihat(xi, tau)
/// with xi_rules over R^{2n} and tau_rules over R^r (one rule per axis).
std::vector<std::complex<double>> group_convolve_fourier(const FourierFunction& phihat,
                                                         const FourierFunction& psihat,
                                                         const StepTwoGroup& g,
                                                         const std::vector<Rule1D>& xi_rules,
                                                         const std::vector<Rule1D>& tau_rules,
                                                         const std::vector<GroupPoint>& points);

/// Fourier transform of a sampled field by direct trapezoid quadrature.
/// The field's axes are (y, t) with the first m axes horizontal.
FourierFunction fourier_of(const SampledField& f, int m);

/// Quadrature controls for the Abel means.
struct AbelQuadrature {
  double tau_max = 12.0;            ///< radial cutoff of the frequency integral
  double tau_smallest_panel = 1e-3;  ///< first graded panel width near tau = 0
  int tau_nodes_per_panel = 16;
  int sphere_order = 8;              ///< sphere rule order for r >= 2
  double xi_half_width = 12.0;       ///< assumed support radius of fhat(., tau)
  int xi_nodes = 64;                 ///< trapezoid nodes per horizontal frequency axis
  double width_factor = 9.0;         ///< multiplier window in standard deviations
};

/// Fourier multiplier of sum_k R^{|k|} L~_k^{(0)}(., tau):
///   prod_j 2/(1+R) exp(-((1-R)/(1+R)) |Xi_j|^2 / (4 mu_j(tau))),
/// with Xi the tau-coordinates of xi.
double abel_multiplier(const TauFrame& frame, double R, const Eigen::VectorXd& xi);

/// Partial Fourier transform at tau of the Abel mean, i.e.
/// (f~_tau *_tau sum_k R^{|k|} L~_k^{(0)})(y), from fhat.
std::complex<double> abel_partial(const FourierFunction& fhat, const StepTwoGroup& g,
                                  const TauFrame& frame, double R, const Eigen::VectorXd& y,
                                  const AbelQuadrature& q = {});

/// Same quantity by direct twisted convolution of the sampled f~_tau with the
/// truncated sum over |k| <= K (test oracle for abel_partial).
std::vector<std::complex<double>> abel_partial_direct(const SampledField& f_tilde,
                                                      const StepTwoGroup& g, const TauFrame& frame,
                                                      double R, int K,
                                                      const std::vector<std::size_t>& nodes);

/// Abel means A_R f = sum_k R^{|k|} f * L_k^{(0)} at the given points, via the
/// Fourier multiplier. Throws DomainError unless 0 < R < 1.
std::vector<std::complex<double>> abel_approx_identity(const FourierFunction& fhat,
                                                       const StepTwoGroup& g, double R,
                                                       const std::vector<GroupPoint>& points,
                                                       const AbelQuadrature& q = {});

/// Field form on the grid of f (axes (y, t)); fhat by direct quadrature. Desk-scale only.
SampledField abel_approx_identity(const SampledField& f, const StepTwoGroup& g, double R,
                                  const AbelQuadrature& q = {});

}  // namespace lagcalc
