#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lagcalc {

/// One-dimensional quadrature rule: integral ~ sum_i weights[i] f(nodes[i]).
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite trapezoid rule with n >= 2 equispaced nodes on [a, b].
Rule1D trapezoid(double a, double b, int n);

/// Composite Gauss-Legendre rule over consecutive panels [breaks[i], breaks[i+1]].
Rule1D composite_gauss_legendre(std::span<const double> breaks, int nodes_per_panel);

/// Rule on [-T, T] with panels refined geometrically towards 0 (both sides),
/// for integrands with a boundary layer at the origin.
Rule1D graded_symmetric(double half_width, double smallest_panel, int nodes_per_panel);

/// Quadrature rule on the unit sphere S^{r-1} in R^r.
struct SphereRule {
  std::vector<Eigen::VectorXd> directions;
  std::vector<double> weights;

  std::size_t size() const noexcept { return directions.size(); }
};

/// Sphere rule of the given order:
///  r = 1: the two points {+1, -1} with unit weights;
///  r = 2: `order` equispaced angles (trapezoid on the circle);
///  r = 3: Gauss-Legendre in cos(theta) x 2*order equispaced azimuths;
///  r > 3: recursive Gauss-Legendre in the polar angle with sin^{r-2} weight.
SphereRule sphere_rule(int r, int order);

/// Surface area of S^{r-1}.
double sphere_area(int r);

/// Sum by a fixed binary tree over the index range; the result depends only
/// on the values and their order.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration on [a, b]. Subdivides the panel
/// with the largest error estimate until the total estimate is below
/// max(abs_tol, rel_tol * |value|). Throws ConvergenceError after max_panels.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double abs_tol = 1e-12,
                                    double rel_tol = 1e-12, int max_panels = 2000);

}  // namespace lagcalc
