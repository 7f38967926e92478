#include "lagcalc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lagcalc/error.hpp"
#include "lagcalc/parallel.hpp"
#include "lagcalc/quadrature.hpp"

namespace lagcalc {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr cd kI(0.0, 1.0);

std::vector<std::vector<int>> raw_grid(int n, int K) {
  std::vector<std::vector<int>> out{{}};
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& k : out)
      for (int v = 0; v <= K; ++v) {
        auto e = k;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

cd ipow(cd base, int e) {
  cd out = 1.0;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

double SubLaplacianSymbol::value(const std::vector<int>& raw_k) const {
  if (static_cast<int>(raw_k.size()) != frame.n())
    throw DimensionError("index length n", "symbol index length mismatch");
  std::size_t pos = 0;
  for (int v : raw_k) {
    if (v < 0 || v > K) throw DomainError("raw index entries in 0..K", "symbol index out of range");
    pos = pos * (K + 1) + v;
  }
  return diag(static_cast<Eigen::Index>(pos));
}

SubLaplacianSymbol sublap_symbol(const TauFrame& frame, int K) {
  if (K < 0) throw DomainError("K >= 0", "sublap_symbol: negative truncation");
  if (!(frame.mu.size() > 0 && frame.mu.minCoeff() > 0.0))
    throw DegenerateTau({}, "sublap_symbol: frame is degenerate");
  const auto ks = raw_grid(frame.n(), K);
  SubLaplacianSymbol S{frame, K, false, VectorXd(ks.size())};
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double v = 0.0;
    for (int j = 0; j < frame.n(); ++j) v += frame.mu(j) * (2.0 * ks[i][j] + 1.0);
    S.diag(static_cast<Eigen::Index>(i)) = v;
  }
  return S;
}

SubLaplacianSymbol sublap_inverse_symbol(const SubLaplacianSymbol& S) {
  if (!(S.diag.size() > 0 && S.diag.cwiseAbs().minCoeff() > 0.0))
    throw DomainError("nonzero symbol", "sublap_inverse_symbol: zero eigenvalue");
  SubLaplacianSymbol out = S;
  out.inverse = !S.inverse;
  out.diag = S.diag.cwiseInverse();
  return out;
}

LaguerreTensor apply_symbol(const SubLaplacianSymbol& S, const LaguerreTensor& T) {
  if (!same_frame(S.frame, T.frame))
    throw DimensionError("same frame", "apply_symbol: symbol and tensor use different frames");
  if (T.K - 1 > S.K) throw DimensionError("symbol covers tensor", "apply_symbol: symbol K too small");
  LaguerreTensor out = T;
  for (Eigen::Index col = 0; col < T.F.cols(); ++col) {
    std::vector<int> k = multi_index_at(static_cast<std::size_t>(col), T.n(), T.K);
    for (int& v : k) v -= 1;
    out.F.col(col) *= S.value(k);
  }
  return out;
}

double mu_over_sinh(double mu) {
  mu = std::abs(mu);
  if (mu < 1e-4) {
    const double m2 = mu * mu;
    return 1.0 - m2 / 6.0 + 7.0 * m2 * m2 / 360.0;
  }
  if (mu > 20.0) {
    const double e = std::exp(-mu);
    return 2.0 * mu * e / (1.0 - e * e);
  }
  return mu / std::sinh(mu);
}

double mu_coth(double mu) {
  mu = std::abs(mu);
  if (mu < 1e-4) {
    const double m2 = mu * mu;
    return 1.0 + m2 / 3.0 - m2 * m2 / 45.0;
  }
  const double e2 = std::exp(-2.0 * mu);
  return mu * (1.0 + e2) / (1.0 - e2);
}

cd fs_integrand(const StepTwoGroup& g, const VectorXd& tau, const VectorXd& y, const VectorXd& t) {
  if (y.size() != g.m() || t.size() != g.r() || tau.size() != g.r())
    throw DimensionError("shapes (2n, r, r)", "fs_integrand: shape mismatch");
  if (y.norm() == 0.0 && t.norm() == 0.0)
    throw DomainError("(y, t) != 0", "fs_integrand: point is the origin");
  const int N = g.n() + g.r() - 1;
  if (tau.norm() == 0.0) return 1.0 / ipow(cd(y.squaredNorm(), 0.0), N);
  const TauFrame f = normalize(g, tau);
  const VectorXcd z = complex_tau_coordinates(f, y);
  double det = 1.0, quad = 0.0;
  for (int j = 0; j < f.n(); ++j) {
    det *= mu_over_sinh(f.mu(j));
    quad += mu_coth(f.mu(j)) * std::norm(z(j));
  }
  return det / ipow(cd(quad, t.dot(tau)), N);
}

namespace detail {

cd fs_integrand_dense(const StepTwoGroup& g, const VectorXd& tau, const VectorXd& y,
                      const VectorXd& t) {
  const MatrixXd B = b_tau(g, tau);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(B.transpose() * B);
  const VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const MatrixXd& Q = es.eigenvectors();
  // det[|B|/sinh|B|]^{1/2} and <|B| coth|B| y, y> from the spectral calculus of |B|.
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) logdet += 0.5 * std::log(mu_over_sinh(lam(i)));
  const VectorXd c = Q.transpose() * y;
  double quad = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) quad += mu_coth(lam(i)) * c(i) * c(i);
  return std::exp(logdet) / ipow(cd(quad, t.dot(tau)), g.n() + g.r() - 1);
}

}  // namespace detail

FundamentalSolver::FundamentalSolver(StepTwoGroup g, FsQuadrature q)
    : g_(std::move(g)), q_(q) {
  if (!(q_.tol > 0.0) || q_.nodes_per_panel < 1 || !(q_.panel_width > 0.0) ||
      q_.sphere_order < 1 || q_.max_levels < 1 || !(q_.decay_budget > 0.0))
    throw DomainError("positive quadrature controls", "FundamentalSolver: invalid quadrature");
}

const std::vector<FundamentalSolver::Direction>& FundamentalSolver::directions(int level) const {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(level);
  if (it != cache_.end()) return *it->second;
  const int r = g_.r();
  const SphereRule sphere = sphere_rule(r, r == 1 ? 1 : q_.sphere_order << level);
  auto dirs = std::make_unique<std::vector<Direction>>(sphere.size());
  parallel_for(sphere.size(), [&](std::size_t i) {
    Direction& d = (*dirs)[i];
    d.omega = sphere.directions[i];
    d.weight = sphere.weights[i];
    try {
      const TauFrame f = normalize(g_, d.omega);
      for (int j = 0; j < f.n(); ++j) {
        d.slots.push_back({f.mu(j), f.O.col(2 * j)});
        d.slots.push_back({f.mu(j), f.O.col(2 * j + 1)});
      }
    } catch (const DegenerateTau&) {
      // Measure-zero direction: fall back to the spectral calculus of |B|.
      const MatrixXd B = b_tau(g_, d.omega);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(B.transpose() * B);
      for (Eigen::Index a = 0; a < B.rows(); ++a)
        d.slots.push_back({std::sqrt(std::max(0.0, es.eigenvalues()(a))), es.eigenvectors().col(a)});
    }
    double msum = 0.0;
    for (const Slot& s : d.slots) msum += 0.5 * s.m;
    d.rho_max = q_.decay_budget / std::max(msum, 1e-3);
  });
  return *cache_.emplace(level, std::move(dirs)).first->second;
}

cd FundamentalSolver::integrate(const Kernel& kernel, const VectorXd& y, const VectorXd& t,
                                int level, std::size_t* nodes, double* tail) const {
  const auto& dirs = directions(level);
  const int r = g_.r();
  const int per_panel = q_.nodes_per_panel << level;
  const Rule1D unit = gauss_legendre(per_panel, 0.0, 1.0);
  std::vector<cd> parts(dirs.size());
  std::vector<double> tails(dirs.size());
  std::vector<std::size_t> counts(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t i) {
    const Direction& d = dirs[i];
    const int panels = static_cast<int>(std::ceil(d.rho_max / q_.panel_width));
    const double w = d.rho_max / panels;
    cd acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      cd panel = 0.0;
      for (std::size_t k = 0; k < unit.size(); ++k) {
        const double rho = w * (p + unit.nodes[k]);
        panel += unit.weights[k] * std::pow(rho, r - 1) * kernel(d, rho, y, t);
      }
      acc += w * panel;
    }
    parts[i] = d.weight * acc;
    counts[i] = static_cast<std::size_t>(panels) * unit.size();
    // Beyond rho_max the integrand decays at least like exp(-rho sum m).
    double msum = 0.0;
    for (const Slot& s : d.slots) msum += 0.5 * s.m;
    tails[i] = d.weight * std::pow(d.rho_max, r - 1) * std::abs(kernel(d, d.rho_max, y, t)) /
               std::max(msum, 1e-3);
  });
  if (nodes) {
    *nodes = 0;
    for (std::size_t c : counts) *nodes += c;
  }
  if (tail) *tail = pairwise_sum(tails);
  return pairwise_sum(parts);
}

namespace {

cd limit_kernel(const FundamentalSolver::Direction& d, double rho, const VectorXd& y,
                const VectorXd& t, int N) {
  double det = 1.0, quad = 0.0;
  for (const auto& s : d.slots) {
    det *= std::sqrt(mu_over_sinh(rho * s.m));
    const double c = s.v.dot(y);
    quad += mu_coth(rho * s.m) * c * c;
  }
  return det / ipow(cd(quad, rho * t.dot(d.omega)), N);
}

}  // namespace

FsResult FundamentalSolver::evaluate_at_level(const VectorXd& y, const VectorXd& t,
                                              int level) const {
  if (y.size() != g_.m() || t.size() != g_.r())
    throw DimensionError("point shape (2n, r)", "fundamental_solution: shape mismatch");
  if (y.norm() == 0.0)
    throw DomainError("y != 0", "fundamental solution is evaluated only for y != 0");
  const int n = g_.n(), N = n + g_.r() - 1;
  const double c = std::tgamma(static_cast<double>(N)) / std::pow(std::numbers::pi, n);
  FsResult res;
  res.level = level;
  const cd v = integrate(
      [N](const Direction& d, double rho, const VectorXd& yy, const VectorXd& tt) {
        return limit_kernel(d, rho, yy, tt, N);
      },
      y, t, level, &res.nodes_used, &res.tail_bound);
  res.value = c * v;
  res.tail_bound *= c;
  return res;
}

FsResult FundamentalSolver::evaluate(const VectorXd& y, const VectorXd& t) const {
  FsResult prev = evaluate_at_level(y, t, 0);
  for (int level = 1; level <= q_.max_levels; ++level) {
    FsResult cur = evaluate_at_level(y, t, level);
    const double diff = std::abs(cur.value - prev.value);
    cur.est_error = diff;
    if (diff <= q_.tol * std::abs(cur.value)) return cur;
    prev = cur;
  }
  throw ConvergenceError("quadrature converges",
                         "fundamental_solution: refinement did not reach the tolerance");
}

FsResult fundamental_solution(const StepTwoGroup& g, const VectorXd& y, const VectorXd& t,
                              const FsQuadrature& q) {
  return FundamentalSolver(g, q).evaluate(y, t);
}

cd sublaplacian_fd(const StepTwoGroup& g,
                   const std::function<cd(const VectorXd&, const VectorXd&)>& F,
                   const GroupPoint& p, double h) {
  g.check_point(p);
  if (!(h > 0.0)) throw DomainError("h > 0", "finite-difference step must be positive");
  cd sum = 0.0;
  for (int k = 0; k < g.m(); ++k) {
    const VectorXd c = vector_field_coefficients(g, k, p);
    auto at = [&](double s) {
      return F(p.y + s * c.head(g.m()), p.t + s * c.tail(g.r()));
    };
    sum += (-at(2 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2 * h)) /
           (12.0 * h * h);
  }
  return -0.25 * sum;
}

double harmonicity_check(const FundamentalSolver& solver, const std::vector<GroupPoint>& points,
                         double h) {
  double worst = 0.0;
  for (const GroupPoint& p : points) {
    if (p.y.norm() < 10.0 * h)
      throw DomainError("|y| >= 10 h", "harmonicity_check: step too large for the point");
    // All stencil nodes use the level the centre needs, so quadrature error is
    // a smooth function of the point and cancels in the differences.
    const int level = solver.evaluate(p.y, p.t).level;
    const cd v = sublaplacian_fd(
        solver.group(),
        [&](const VectorXd& y, const VectorXd& t) {
          return solver.evaluate_at_level(y, t, level).value;
        },
        p, h);
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

namespace detail {

cd psi_R(const FundamentalSolver& solver, const VectorXd& y, const VectorXd& t, double R,
         int level) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("0 < R < 1", "psi_R: R outside (0, 1)");
  const StepTwoGroup& g = solver.group();
  const int n = g.n(), N = n + g.r() - 1;
  const double c = std::pow(2.0, n) * std::tgamma(static_cast<double>(N)) /
                   std::pow(std::numbers::pi, n);
  const cd v = solver.integrate(
      [R, N](const FundamentalSolver::Direction& d, double rho, const VectorXd& yy,
             const VectorXd& tt) {
        // Slots come in equal pairs; each contributes the square root of its factor.
        double num = 1.0, quad = 0.0;
        for (const auto& s : d.slots) {
          const double mu = rho * s.m;
          const double e1 = std::exp(-mu), e2 = e1 * e1;
          num *= std::sqrt(mu / (std::exp(mu) * (1.0 - e2 * R)));
          const double cv = s.v.dot(yy);
          quad += mu * cv * cv * (1.0 + e2 * R) / (1.0 - e2 * R);
        }
        return num / ipow(cd(quad, rho * tt.dot(d.omega)), N);
      },
      y, t, level, nullptr, nullptr);
  return c * v;
}

}  // namespace detail

MatrixXcd SzegoData::hermitian_form(const VectorXd& tau) const {
  MatrixXcd A = kI * D;
  for (int i = 0; i <= k; ++i) A(i, i) += tau.norm() * M(i);
  return A;
}

SzegoData szego_data(int k, const VectorXd& tau) {
  if (k < 1) throw DomainError("k >= 1", "szego_data: k must be positive");
  if (tau.size() != 3) throw DimensionError("tau in R^3", "szego_data: tau must have length 3");
  const double norm = tau.norm();
  if (norm == 0.0) throw DomainError("tau != 0", "szego_data: tau must be nonzero");
  SzegoData s;
  s.k = k;
  const int d = k + 1;
  s.M = VectorXd::Constant(d, 2.0);
  s.M(0) = 1.0;
  s.M(k) = 1.0;
  const cd up(tau(1), -tau(2)), down(-tau(1), -tau(2));
  s.D = MatrixXcd::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    s.D(i, i + 1) = up;
    s.D(i + 1, i) = down;
  }
  s.D(0, 0) += kI * tau(0);
  s.D(k, k) += -kI * tau(0);

  const VectorXd u = tau / norm;
  // 1 + u_1 without cancellation when u_1 is close to -1.
  const double a = u(0) >= 0.0 ? 1.0 + u(0) : (u(1) * u(1) + u(2) * u(2)) / (1.0 - u(0));
  const cd b(-u(2), u(1));  // i u_2 - u_3
  s.e1 = VectorXcd::Zero(d);
  if (a == 0.0) {
    s.e1(k) = 1.0;
  } else {
    const double scale = std::max(a, std::abs(b));
    for (int j = 0; j <= k; ++j)
      s.e1(j) = std::pow(a / scale, k - j) * std::pow(b / scale, j);
    s.e1.normalize();
  }
  double g2 = 0.0;
  for (int j = 0; j <= k; ++j) g2 += std::pow(a, 2 * k - j) * std::pow(1.0 - u(0), j);
  s.gamma = std::sqrt(g2);
  s.P = s.e1 * s.e1.adjoint();
  return s;
}

double szego_constant() { return 16.0 * std::tgamma(5.0) / std::pow(2.0 * std::numbers::pi, 5); }

MatrixXcd szego_kernel(int k, const VectorXd& y, const VectorXd& s, int sphere_order) {
  if (y.size() != 4 || s.size() != 3)
    throw DimensionError("y in R^4, s in R^3", "szego_kernel: shape mismatch");
  if (y.norm() == 0.0) throw DomainError("y != 0", "szego_kernel is evaluated only for y != 0");
  const SphereRule sphere = sphere_rule(3, sphere_order);
  std::vector<MatrixXcd> terms(sphere.size());
  parallel_for(sphere.size(), [&](std::size_t i) {
    const VectorXd& w = sphere.directions[i];
    const SzegoData d = szego_data(k, w);
    terms[i] = sphere.weights[i] / ipow(cd(y.squaredNorm(), -w.dot(s)), 5) * d.P;
  });
  for (std::size_t width = 1; width < terms.size(); width *= 2)
    for (std::size_t c = 0; c + width < terms.size(); c += 2 * width) terms[c] += terms[c + width];
  return szego_constant() * terms[0];
}

}  // namespace lagcalc
