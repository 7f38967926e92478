#include "lagcalc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "lagcalc/error.hpp"

namespace lagcalc {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

struct Eigen3Split {
  VectorXd mu;    // descending
  MatrixXcd V;    // columns: eigenvectors of B with eigenvalue i mu_j
  double norm2;   // mu_1
};

Eigen3Split split(const StepTwoGroup& g, const VectorXd& tau) {
  const MatrixXd B = b_tau(g, tau);
  if (tau.norm() == 0.0) throw DomainError("tau != 0", "tau must be nonzero");
  const MatrixXcd H = cd(0.0, 1.0) * B.cast<cd>();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("eigensolver converges", "Hermitian eigensolver failed for i B^tau");
  const int n = g.n();
  Eigen3Split out;
  // Ascending eigenvalues of iB: the first n are -mu_1 <= ... <= -mu_n.
  out.mu = -es.eigenvalues().head(n);
  out.V = es.eigenvectors().leftCols(n);
  out.norm2 = std::max(out.mu(0), 0.0);
  return out;
}

// Clusters of equal mu as [begin, end) ranges.
std::vector<std::pair<int, int>> clusters(const VectorXd& mu, double abs_tol) {
  std::vector<std::pair<int, int>> out;
  int begin = 0;
  for (int j = 1; j <= mu.size(); ++j) {
    if (j == mu.size() || mu(j - 1) - mu(j) > abs_tol) {
      out.emplace_back(begin, j);
      begin = j;
    }
  }
  return out;
}

void fix_phase(Eigen::Ref<VectorXcd> v) {
  double best = -1.0;
  int at = 0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best * (1.0 + 1e-12) + 1e-300) {
      best = a;
      at = i;
    }
  }
  if (best > 0.0) v *= std::conj(v(at)) / best;
}

// Canonical orthonormal basis of span(V): repeatedly take the coordinate axis
// whose residual projection is largest (lowest index on near-ties).
MatrixXcd canonical_basis(const MatrixXcd& V) {
  const int m = static_cast<int>(V.rows()), d = static_cast<int>(V.cols());
  MatrixXcd P = V * V.adjoint();  // columns: projected axes
  MatrixXcd out(m, d);
  for (int c = 0; c < d; ++c) {
    VectorXd norms(m);
    for (int a = 0; a < m; ++a) norms(a) = P.col(a).norm();
    const double top = norms.maxCoeff();
    int pick = 0;
    for (int a = 0; a < m; ++a)
      if (norms(a) >= top * (1.0 - 1e-8)) {
        pick = a;
        break;
      }
    VectorXcd v = P.col(pick) / norms(pick);
    // Second Gram-Schmidt pass against the vectors already chosen.
    for (int b = 0; b < c; ++b) v -= out.col(b) * out.col(b).dot(v);
    v.normalize();
    out.col(c) = v;
    P -= v * (v.adjoint() * P);
  }
  return out;
}

MatrixXd frame_from_vectors(const MatrixXcd& V) {
  const int m = static_cast<int>(V.rows()), n = static_cast<int>(V.cols());
  MatrixXd O(m, m);
  const double s = std::numbers::sqrt2;
  for (int j = 0; j < n; ++j) {
    O.col(2 * j) = s * V.col(j).imag();
    O.col(2 * j + 1) = s * V.col(j).real();
  }
  return O;
}

double gap_of(const VectorXd& mu, const std::vector<std::pair<int, int>>& cl) {
  double gap = mu(mu.size() - 1);
  for (std::size_t c = 1; c < cl.size(); ++c)
    gap = std::min(gap, mu(cl[c - 1].second - 1) - mu(cl[c].first));
  return gap;
}

void check_degenerate(const VectorXd& mu, double norm2, double tol) {
  std::vector<int> bad;
  for (int j = 0; j < mu.size(); ++j)
    if (!(mu(j) >= tol * norm2) || norm2 == 0.0) bad.push_back(j);
  if (!bad.empty()) {
    std::string list;
    for (int j : bad) list += (list.empty() ? "" : ",") + std::to_string(j + 1);
    throw DegenerateTau(bad, "B^tau is degenerate: mu_j below tolerance for j in {" + list + "}");
  }
}

}  // namespace

MatrixXd TauFrame::J() const {
  const int m = 2 * n();
  MatrixXd J = MatrixXd::Zero(m, m);
  for (int j = 0; j < n(); ++j) {
    J(2 * j, 2 * j + 1) = -mu(j);
    J(2 * j + 1, 2 * j) = mu(j);
  }
  return J;
}

MatrixXcd TauFrame::eigenvectors() const {
  MatrixXcd V(O.rows(), n());
  for (int j = 0; j < n(); ++j) {
    V.col(j).real() = O.col(2 * j + 1) / std::numbers::sqrt2;
    V.col(j).imag() = O.col(2 * j) / std::numbers::sqrt2;
  }
  return V;
}

VectorXd mu_values(const StepTwoGroup& g, const VectorXd& tau) { return split(g, tau).mu; }

TauFrame normalize(const StepTwoGroup& g, const VectorXd& tau, double tol) {
  Eigen3Split s = split(g, tau);
  check_degenerate(s.mu, s.norm2, tol);
  const auto cl = clusters(s.mu, kClusterTol * s.norm2);
  for (const auto& [b, e] : cl) {
    if (e - b > 1) s.V.middleCols(b, e - b) = canonical_basis(s.V.middleCols(b, e - b));
    for (int j = b; j < e; ++j) fix_phase(s.V.col(j));
  }
  TauFrame f;
  f.tau = tau;
  f.mu = s.mu;
  f.O = frame_from_vectors(s.V);
  f.min_gap = gap_of(s.mu, cl);
  return f;
}

VectorXd tau_coordinates(const TauFrame& frame, const VectorXd& y) {
  if (y.size() != frame.O.rows())
    throw DimensionError("y has length 2n", "tau_coordinates: length mismatch");
  return frame.O.transpose() * y;
}

VectorXcd complex_tau_coordinates(const TauFrame& frame, const VectorXd& y) {
  const VectorXd yt = tau_coordinates(frame, y);
  VectorXcd z(frame.n());
  for (int j = 0; j < frame.n(); ++j) z(j) = cd(yt(2 * j), yt(2 * j + 1));
  return z;
}

TauFrame continue_frame(const TauFrame& prev, const StepTwoGroup& g, const VectorXd& tau_new,
                        double tol) {
  if (prev.O.rows() != g.m() || prev.tau.size() != g.r())
    throw DimensionError("frame belongs to group", "continue_frame: frame/group mismatch");
  Eigen3Split s = split(g, tau_new);
  check_degenerate(s.mu, s.norm2, tol);
  const auto cl_new = clusters(s.mu, kClusterTol * s.norm2);
  const auto cl_old = clusters(prev.mu, kClusterTol * prev.mu(0));
  if (cl_new != cl_old)
    throw AmbiguousMatching("no eigenvalue crossing between steps",
                            "continue_frame: eigenvalue cluster structure changed");
  const MatrixXcd Vprev = prev.eigenvectors();
  for (const auto& [b, e] : cl_new) {
    const int d = e - b;
    const MatrixXcd M = s.V.middleCols(b, d).adjoint() * Vprev.middleCols(b, d);
    Eigen::JacobiSVD<MatrixXcd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() < 0.5)
      throw AmbiguousMatching("dominant overlap with previous frame",
                              "continue_frame: overlap with previous eigenvectors too small "
                              "(eigenvalue crossing or step too large)");
    const MatrixXcd Q = svd.matrixU() * svd.matrixV().adjoint();
    s.V.middleCols(b, d) = s.V.middleCols(b, d) * Q;
  }
  TauFrame f;
  f.tau = tau_new;
  f.mu = s.mu;
  f.O = frame_from_vectors(s.V);
  f.min_gap = gap_of(s.mu, cl_new);
  return f;
}

ScanReport degeneracy_scan(const StepTwoGroup& g, const std::vector<VectorXd>& samples,
                           double tol) {
  ScanReport report;
  std::map<std::vector<int>, int> counts;
  std::vector<std::vector<int>> order;
  for (const VectorXd& tau : samples) {
    ScanSample s;
    s.tau = tau;
    const Eigen3Split sp = split(g, tau);
    s.mu = sp.mu;
    const double thr = tol * sp.norm2;
    const auto cl = clusters(sp.mu, thr);
    for (const auto& [b, e] : cl) s.multiplicity.push_back(e - b);
    double gap = sp.mu(sp.mu.size() - 1);
    for (int j = 1; j < sp.mu.size(); ++j) gap = std::min(gap, sp.mu(j - 1) - sp.mu(j));
    s.min_gap = gap;
    s.near_degenerate = !(sp.mu(sp.mu.size() - 1) >= thr) || sp.norm2 == 0.0;
    if (counts[s.multiplicity]++ == 0) order.push_back(s.multiplicity);
    report.samples.push_back(std::move(s));
  }
  int best = -1;
  for (const auto& pattern : order)
    if (counts[pattern] > best) {
      best = counts[pattern];
      report.generic_multiplicity = pattern;
    }
  for (ScanSample& s : report.samples) {
    s.near_crossing = s.multiplicity != report.generic_multiplicity;
    report.degenerate_count += s.near_degenerate;
    report.crossing_count += s.near_crossing;
  }
  return report;
}

std::vector<VectorXd> sphere_samples(int r, int count) {
  if (r < 1 || count < 1) throw DomainError("r >= 1, count >= 1", "sphere_samples: bad arguments");
  std::vector<VectorXd> out;
  if (r == 1) {
    out.push_back(VectorXd::Constant(1, 1.0));
    out.push_back(VectorXd::Constant(1, -1.0));
    return out;
  }
  if (r == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * (i + 0.5) / count;
      VectorXd v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
    return out;
  }
  if (r == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double rho = std::sqrt(1.0 - z * z);
      VectorXd v(3);
      v << rho * std::cos(golden * i), rho * std::sin(golden * i), z;
      out.push_back(v);
    }
    return out;
  }
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  for (int i = 0; i < count; ++i) {
    VectorXd v(r);
    for (int a = 0; a < r; ++a) {
      const int base = primes[a % 16];
      double f = 1.0, x = 0.0;
      for (int k = i + 1; k > 0; k /= base) {
        f /= base;
        x += f * (k % base);
      }
      // Box-Muller-free mapping: a smooth odd map of (0,1) onto R.
      v(a) = std::tan(std::numbers::pi * (x - 0.5));
    }
    out.push_back(v.normalized());
  }
  return out;
}

}  // namespace lagcalc
