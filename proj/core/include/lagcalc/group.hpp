#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lagcalc {

/// A point (y, t) of a step-two group: horizontal part y in R^{2n}, central part t in R^r.
struct GroupPoint {
  Eigen::VectorXd y;
  Eigen::VectorXd t;
};

/// Step-two nilpotent group R^{2n} x R^r with law
///   (x, t)(y, s) = (x + y, t + s + 2 B(x, y)),   B^beta(x, y) = x^T B^beta y.
/// Immutable after construction; the stored matrices are exactly skew.
class StepTwoGroup {
 public:
  int n() const noexcept { return n_; }
  int r() const noexcept { return r_; }
  int m() const noexcept { return 2 * n_; }
  const Eigen::MatrixXd& B(int beta) const { return B_.at(beta); }
  const std::vector<Eigen::MatrixXd>& matrices() const noexcept { return B_; }

  /// Throws DimensionError unless p has shape (2n, r).
  void check_point(const GroupPoint& p) const;

 private:
  friend StepTwoGroup make_group(int, int, std::vector<Eigen::MatrixXd>, double);
  int n_ = 0;
  int r_ = 0;
  std::vector<Eigen::MatrixXd> B_;
};

/// Validates and builds a group. Each matrix must be 2n x 2n with
/// max|B + B^T| <= skew_tol * max|B| (skew_tol = 0 demands exact skew-symmetry).
/// The stored matrices are the skew parts (B - B^T)/2.
StepTwoGroup make_group(int n, int r, std::vector<Eigen::MatrixXd> B, double skew_tol = 1e-12);

/// Vector of B^beta(x, y) over beta.
Eigen::VectorXd b_form(const StepTwoGroup& g, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

GroupPoint multiply(const StepTwoGroup& g, const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const StepTwoGroup& g, const GroupPoint& a);
GroupPoint identity(const StepTwoGroup& g);

/// B^tau = sum_beta tau_beta B^beta.
Eigen::MatrixXd b_tau(const StepTwoGroup& g, const Eigen::VectorXd& tau);

/// Coefficients of Y_k = d/dy_k + 2 sum_beta sum_l B^beta_{lk} y_l d/dt_beta at p,
/// in the basis (d/dy_1..d/dy_2n, d/dt_1..d/dt_r). k is 0-based.
Eigen::VectorXd vector_field_coefficients(const StepTwoGroup& g, int k, const GroupPoint& p);

/// Parabolic dilation (lambda y, lambda^2 t).
GroupPoint dilate(const StepTwoGroup& g, double lambda, const GroupPoint& p);

/// Named groups: "heisenberg-N" (N >= 1, B^1 = direct sum of [[0,1],[-1,0]])
/// and "quaternionic-heisenberg" (n = 2, r = 3, quaternion relations).
StepTwoGroup preset(std::string_view name);

/// Parses {"n": int, "r": int, "B": [...]}. Each B entry is either a flat
/// row-major list of (2n)^2 numbers, a list of 2n rows, or a flat list of the
/// (2n)(2n-1)/2 strict upper-triangle entries (row-major). Full matrices must be
/// exactly skew. Throws FormatError on malformed input.
StepTwoGroup parse_group_json(std::string_view text);
StepTwoGroup load_group_json(const std::string& path);

/// Accepts "preset:NAME", a bare preset name, or a JSON file path.
StepTwoGroup resolve_group(const std::string& spec);

/// Serializes a group to the JSON format accepted by parse_group_json (nested rows).
std::string group_to_json(const StepTwoGroup& g);

}  // namespace lagcalc
