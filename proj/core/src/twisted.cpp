#include "lagcalc/twisted.hpp"

#include <cmath>
#include <numbers>

#include "lagcalc/error.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/parallel.hpp"

namespace lagcalc {

using cd = std::complex<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr cd kI(0.0, 1.0);

std::vector<std::size_t> strides_of(const std::vector<Axis>& axes) {
  std::vector<std::size_t> s(axes.size(), 1);
  for (std::size_t a = axes.size(); a-- > 1;) s[a - 1] = s[a] * axes[a].count;
  return s;
}

// Index offset o with node(o) = 0, required for lattice-aligned differences.
std::vector<long> origin_offsets(const std::vector<Axis>& axes) {
  std::vector<long> o;
  for (const Axis& a : axes) {
    const double u = -a.min / a.step();
    const double r = std::round(u);
    if (std::abs(u - r) > 1e-6 || r < 0 || r >= static_cast<double>(a.count))
      throw GridError("grid nodes form a lattice through the origin",
                      "twisted convolution needs min/step integral with the origin inside "
                      "the grid on every axis");
    o.push_back(static_cast<long>(r));
  }
  return o;
}

struct TwistedPlan {
  const SampledField& f;
  const SampledField& h;
  std::vector<std::size_t> stride;
  std::vector<long> origin;
  std::vector<long> iy;
  std::vector<std::vector<cd>> phase;

  cd sum(std::size_t a, std::size_t foff, std::size_t hoff) const {
    const long N = static_cast<long>(f.axes()[a].count);
    const long lo = std::max(0L, iy[a] + origin[a] - N + 1);
    const long hi = std::min(N - 1, iy[a] + origin[a]);
    cd acc = 0.0;
    const bool last = a + 1 == stride.size();
    for (long i = lo; i <= hi; ++i) {
      const std::size_t fo = foff + static_cast<std::size_t>(iy[a] - i + origin[a]) * stride[a];
      const std::size_t ho = hoff + static_cast<std::size_t>(i) * stride[a];
      if (last)
        acc += f[fo] * h[ho] * phase[a][i];
      else
        acc += phase[a][i] * sum(a + 1, fo, ho);
    }
    return acc;
  }
};

// sum over all nodes of f(node) * prod_a tables[a][i_a], last axis innermost.
cd separable_sum(const SampledField& f, const std::vector<std::vector<cd>>& tables,
                 const std::vector<std::size_t>& stride, std::size_t a, std::size_t off) {
  cd acc = 0.0;
  const std::size_t N = f.axes()[a].count;
  const bool last = a + 1 == stride.size();
  for (std::size_t i = 0; i < N; ++i) {
    const cd w = tables[a][i];
    if (w == 0.0) continue;
    acc += w * (last ? f[off + i * stride[a]] : separable_sum(f, tables, stride, a + 1,
                                                               off + i * stride[a]));
  }
  return acc;
}

// Applies tables[a] (rows: outputs, columns: input nodes) along every axis in turn,
// a separable transform of cost d * N^{d+1}.
std::vector<cd> separable_transform(const std::vector<cd>& in, const std::vector<Axis>& axes,
                                    const std::vector<std::vector<std::vector<cd>>>& tables) {
  std::vector<cd> cur = in, next(in.size());
  const auto stride = strides_of(axes);
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const std::size_t N = axes[a].count, s = stride[a];
    const std::size_t outer = cur.size() / (N * s);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t inner = 0; inner < s; ++inner) {
        const std::size_t base = o * N * s + inner;
        for (std::size_t i = 0; i < N; ++i) {
          cd acc = 0.0;
          const auto& row = tables[a][i];
          for (std::size_t j = 0; j < N; ++j) acc += row[j] * cur[base + j * s];
          next[base + i * s] = acc;
        }
      }
    std::swap(cur, next);
  }
  return cur;
}

// Frequency lattice of one axis: N nodes covering [-pi/h, pi/h).
std::vector<double> frequency_nodes(const Axis& ax) {
  const std::size_t N = ax.count;
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(N) * ax.step());
  std::vector<double> w(N);
  for (std::size_t i = 0; i < N; ++i)
    w[i] = (static_cast<double>(i) - static_cast<double>(N / 2)) * dw;
  return w;
}

// Table h * exp(-i (w_i - c) x_j) for one axis.
std::vector<std::vector<cd>> dft_table(const Axis& ax, const std::vector<double>& w, double c) {
  std::vector<std::vector<cd>> t(w.size(), std::vector<cd>(ax.count));
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < ax.count; ++j)
      t[i][j] = ax.step() * std::exp(-kI * (w[i] - c) * ax.at(j));
  return t;
}

// Product-rule iteration: calls body(nodes, weight) for every tensor node.
template <class Body>
void for_each_node(const std::vector<Rule1D>& rules, Body&& body) {
  const std::size_t d = rules.size();
  std::vector<std::size_t> idx(d, 0);
  VectorXd x(d);
  if (d == 0) return;
  for (;;) {
    double w = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      x(a) = rules[a].nodes[idx[a]];
      w *= rules[a].weights[idx[a]];
    }
    body(x, w);
    std::size_t a = d;
    while (a-- > 0) {
      if (++idx[a] < rules[a].size()) break;
      idx[a] = 0;
      if (a == 0) return;
    }
  }
}

// Nodes and weights of the tau integral over R^r.
struct TauRule {
  std::vector<VectorXd> nodes;
  std::vector<double> weights;
};

TauRule tau_rule(int r, const AbelQuadrature& q) {
  TauRule out;
  if (r == 1) {
    const Rule1D rule = graded_symmetric(q.tau_max, q.tau_smallest_panel, q.tau_nodes_per_panel);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      out.nodes.push_back(VectorXd::Constant(1, rule.nodes[i]));
      out.weights.push_back(rule.weights[i]);
    }
    return out;
  }
  std::vector<double> breaks{0.0};
  for (double x = q.tau_smallest_panel; x < q.tau_max; x *= 4.0) breaks.push_back(x);
  breaks.push_back(q.tau_max);
  const Rule1D radial = composite_gauss_legendre(breaks, q.tau_nodes_per_panel);
  const SphereRule sphere = sphere_rule(r, q.sphere_order);
  for (std::size_t i = 0; i < radial.size(); ++i)
    for (std::size_t s = 0; s < sphere.size(); ++s) {
      out.nodes.push_back(radial.nodes[i] * sphere.directions[s]);
      out.weights.push_back(radial.weights[i] * std::pow(radial.nodes[i], r - 1) *
                            sphere.weights[s]);
    }
  return out;
}

}  // namespace

SampledField partial_fourier(const SampledField& f, const StepTwoGroup& g, const VectorXd& tau) {
  const std::size_t m = g.m(), r = g.r();
  if (f.dim() != m + r)
    throw DimensionError("field over R^{2n+r}", "partial_fourier: field has " +
                                                    std::to_string(f.dim()) + " axes, expected " +
                                                    std::to_string(m + r));
  if (static_cast<std::size_t>(tau.size()) != r)
    throw DimensionError("tau has length r", "partial_fourier: tau length mismatch");
  std::vector<Axis> out_axes(f.axes().begin(), f.axes().begin() + m);
  std::vector<std::vector<cd>> tables(m + r);
  for (std::size_t a = 0; a < r; ++a) {
    const Axis& ax = f.axes()[m + a];
    if (std::abs(tau(a)) > std::numbers::pi / ax.step())
      throw GridError("|tau| below the Nyquist limit of the central grid",
                      "partial_fourier: tau component " + std::to_string(a + 1) +
                          " exceeds pi / step");
    const Rule1D w = trapezoid(ax.min, ax.max, static_cast<int>(ax.count));
    auto& t = tables[m + a];
    t.resize(ax.count);
    for (std::size_t i = 0; i < ax.count; ++i)
      t[i] = w.weights[i] * std::exp(-kI * tau(a) * w.nodes[i]);
  }
  SampledField out(out_axes);
  const auto stride = strides_of(f.axes());
  std::size_t central = 1;
  for (std::size_t a = 0; a < r; ++a) central *= f.axes()[m + a].count;
  const std::vector<std::size_t> cstride(stride.begin() + m, stride.end());
  // Sum over the central axes only; horizontal node i fixes the offset.
  struct Central {
    const SampledField& f;
    const std::vector<std::vector<cd>>& t;
    const std::vector<std::size_t>& s;
    std::size_t m;
    cd sum(std::size_t a, std::size_t off) const {
      cd acc = 0.0;
      const bool last = a + 1 == s.size();
      for (std::size_t k = 0; k < t[m + a].size(); ++k)
        acc += t[m + a][k] * (last ? f[off + k * s[a]] : sum(a + 1, off + k * s[a]));
      return acc;
    }
  } central_sum{f, tables, cstride, m};
  parallel_for(out.size(), [&](std::size_t i) { out[i] = central_sum.sum(0, i * central); });
  return out;
}

std::vector<cd> twisted_convolve_nodes(const SampledField& f, const SampledField& h,
                                       const MatrixXd& Bt, const std::vector<std::size_t>& nodes) {
  if (!f.same_grid(h)) throw GridError("fields share a grid", "twisted convolution: grid mismatch");
  const std::size_t d = f.dim();
  if (static_cast<std::size_t>(Bt.rows()) != d || static_cast<std::size_t>(Bt.cols()) != d)
    throw DimensionError("B^tau matches the field dimension",
                         "twisted convolution: matrix/field dimension mismatch");
  const auto origin = origin_offsets(f.axes());
  const auto stride = strides_of(f.axes());
  const double cell = f.cell_volume();
  std::vector<cd> out(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t q) {
    if (nodes[q] >= f.size()) throw DomainError("node inside grid", "output node out of range");
    const VectorXd y = f.point(nodes[q]);
    const VectorXd c = Bt.transpose() * y;
    TwistedPlan plan{f, h, stride, origin, {}, {}};
    for (std::size_t i : f.unflatten(nodes[q])) plan.iy.push_back(static_cast<long>(i));
    plan.phase.resize(d);
    for (std::size_t a = 0; a < d; ++a) {
      const Axis& ax = f.axes()[a];
      plan.phase[a].resize(ax.count);
      for (std::size_t i = 0; i < ax.count; ++i)
        plan.phase[a][i] = std::exp(-2.0 * kI * c(a) * ax.at(i));
    }
    out[q] = cell * plan.sum(0, 0, 0);
  });
  return out;
}

SampledField twisted_convolve(const SampledField& f, const SampledField& h, const StepTwoGroup& g,
                              const VectorXd& tau) {
  std::vector<std::size_t> all(f.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  SampledField out(f.axes(), twisted_convolve_at(f, h, g, tau, all));
  return out;
}

std::vector<cd> twisted_convolve_at(const SampledField& f, const SampledField& h,
                                    const StepTwoGroup& g, const VectorXd& tau,
                                    const std::vector<std::size_t>& nodes) {
  if (f.dim() != static_cast<std::size_t>(g.m()))
    throw DimensionError("field over R^{2n}", "twisted convolution: field dimension is not 2n");
  return twisted_convolve_nodes(f, h, b_tau(g, tau), nodes);
}

std::vector<cd> twisted_convolve_fourier_at(const SampledField& f, const SampledField& h,
                                            const StepTwoGroup& g, const VectorXd& tau,
                                            const std::vector<std::size_t>& nodes) {
  if (f.dim() != static_cast<std::size_t>(g.m()))
    throw DimensionError("field over R^{2n}", "twisted convolution: field dimension is not 2n");
  if (!f.same_grid(h)) throw GridError("fields share a grid", "twisted convolution: grid mismatch");
  const MatrixXd Bt = b_tau(g, tau);
  const auto& axes = f.axes();
  const std::size_t d = axes.size();
  std::vector<std::vector<double>> w(d);
  std::vector<std::vector<std::vector<cd>>> plain(d);
  double dvol = 1.0;
  for (std::size_t a = 0; a < d; ++a) {
    w[a] = frequency_nodes(axes[a]);
    plain[a] = dft_table(axes[a], w[a], 0.0);
    dvol *= 2.0 * std::numbers::pi / (static_cast<double>(axes[a].count) * axes[a].step());
  }
  const std::vector<cd> fhat = separable_transform(f.values(), axes, plain);
  const double norm = dvol / std::pow(2.0 * std::numbers::pi, static_cast<double>(d));
  std::vector<cd> out(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t q) {
    if (nodes[q] >= f.size()) throw DomainError("node inside grid", "output node out of range");
    const VectorXd y = f.point(nodes[q]);
    const VectorXd c = 2.0 * Bt * y;
    std::vector<std::vector<std::vector<cd>>> shifted(d);
    std::vector<std::vector<cd>> carrier(d);
    for (std::size_t a = 0; a < d; ++a) {
      shifted[a] = dft_table(axes[a], w[a], c(static_cast<Eigen::Index>(a)));
      carrier[a].resize(w[a].size());
      for (std::size_t i = 0; i < w[a].size(); ++i) carrier[a][i] = std::exp(kI * w[a][i] * y(a));
    }
    const std::vector<cd> hhat = separable_transform(h.values(), axes, shifted);
    std::vector<cd> prod(fhat.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fhat[i] * hhat[i];
    out[q] = norm * separable_sum(SampledField(axes, std::move(prod)), carrier, strides_of(axes), 0, 0);
  });
  return out;
}

MatrixXd normal_form_1d(double tau) {
  MatrixXd B(2, 2);
  B << 0.0, -tau, tau, 0.0;
  return B;
}

SampledField twisted_convolve_1d(const SampledField& f, const SampledField& h, double tau) {
  std::vector<std::size_t> all(f.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return SampledField(f.axes(), twisted_convolve_1d_at(f, h, tau, all));
}

std::vector<cd> twisted_convolve_1d_at(const SampledField& f, const SampledField& h, double tau,
                                       const std::vector<std::size_t>& nodes) {
  if (f.dim() != 2) throw DimensionError("field over R^2", "twisted_convolve_1d: field is not 2-d");
  return twisted_convolve_nodes(f, h, normal_form_1d(tau), nodes);
}

std::vector<cd> group_convolve(const GroupFunction& phi, const GroupFunction& psi,
                               const StepTwoGroup& g, const std::vector<Rule1D>& rules,
                               const std::vector<GroupPoint>& points) {
  const int m = g.m(), r = g.r();
  if (static_cast<int>(rules.size()) != m + r)
    throw DimensionError("one rule per axis of R^{2n+r}", "group_convolve: wrong rule count");
  std::vector<cd> out(points.size());
  parallel_for(points.size(), [&](std::size_t q) {
    const GroupPoint& p = points[q];
    g.check_point(p);
    cd acc = 0.0;
    for_each_node(rules, [&](const VectorXd& z, double w) {
      const VectorXd x = z.head(m), t = z.tail(r);
      const cd a = phi(x, t);
      if (a == 0.0) return;
      const VectorXd s = p.t - t - 2.0 * b_form(g, x, p.y);
      acc += w * a * psi(p.y - x, s);
    });
    out[q] = acc;
  });
  return out;
}

SampledField group_convolve(const SampledField& phi, const SampledField& psi,
                            const StepTwoGroup& g) {
  const int m = g.m(), r = g.r();
  if (phi.dim() != static_cast<std::size_t>(m + r) || !phi.same_grid(psi))
    throw GridError("fields share a grid over R^{2n+r}", "group_convolve: grid mismatch");
  const double cell = phi.cell_volume();
  SampledField out(phi.axes());
  parallel_for(out.size(), [&](std::size_t q) {
    const VectorXd p = phi.point(q);
    const VectorXd y = p.head(m), s = p.tail(r);
    cd acc = 0.0;
    VectorXd arg(m + r);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (phi[i] == 0.0) continue;
      const VectorXd z = phi.point(i);
      const VectorXd x = z.head(m), t = z.tail(r);
      arg.head(m) = y - x;
      arg.tail(r) = s - t - 2.0 * b_form(g, x, y);
      acc += phi[i] * psi.interpolate(arg);
    }
    out[q] = cell * acc;
  });
  return out;
}

VectorXd shifted_frequency(const StepTwoGroup& g, const VectorXd& y, const VectorXd& xi,
                           const VectorXd& tau) {
  return xi + 2.0 * b_tau(g, tau) * y;
}

std::vector<cd> group_convolve_fourier(const FourierFunction& phihat, const FourierFunction& psihat,
                                       const StepTwoGroup& g, const std::vector<Rule1D>& xi_rules,
                                       const std::vector<Rule1D>& tau_rules,
                                       const std::vector<GroupPoint>& points) {
  const int m = g.m(), r = g.r();
  if (static_cast<int>(xi_rules.size()) != m || static_cast<int>(tau_rules.size()) != r)
    throw DimensionError("rules over R^{2n} and R^r", "group_convolve_fourier: wrong rule count");
  const double scale = std::pow(2.0 * std::numbers::pi, -(m + r));
  std::vector<cd> out(points.size());
  parallel_for(points.size(), [&](std::size_t q) {
    const GroupPoint& p = points[q];
    g.check_point(p);
    cd acc = 0.0;
    for_each_node(tau_rules, [&](const VectorXd& tau, double wt) {
      const VectorXd shift = 2.0 * b_tau(g, tau) * p.y;
      cd inner = 0.0;
      for_each_node(xi_rules, [&](const VectorXd& xi, double wx) {
        inner += wx * std::exp(kI * p.y.dot(xi)) * phihat(xi + shift, tau) * psihat(xi, tau);
      });
      acc += wt * std::exp(kI * p.t.dot(tau)) * inner;
    });
    out[q] = scale * acc;
  });
  return out;
}

FourierFunction fourier_of(const SampledField& f, int m) {
  const auto stride = strides_of(f.axes());
  return [f, m, stride](const VectorXd& xi, const VectorXd& tau) -> cd {
    const std::size_t d = f.dim();
    if (static_cast<std::size_t>(xi.size() + tau.size()) != d || xi.size() != m)
      throw DimensionError("frequency matches field axes", "fourier_of: dimension mismatch");
    std::vector<std::vector<cd>> tables(d);
    for (std::size_t a = 0; a < d; ++a) {
      const Axis& ax = f.axes()[a];
      const double w = a < static_cast<std::size_t>(m) ? xi(a) : tau(a - m);
      const Rule1D rule = trapezoid(ax.min, ax.max, static_cast<int>(ax.count));
      tables[a].resize(ax.count);
      for (std::size_t i = 0; i < ax.count; ++i)
        tables[a][i] = rule.weights[i] * std::exp(-kI * w * rule.nodes[i]);
    }
    return separable_sum(f, tables, stride, 0, 0);
  };
}

double abel_multiplier(const TauFrame& frame, double R, const VectorXd& xi) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("0 < R < 1", "Abel parameter R outside (0, 1)");
  const VectorXd X = frame.O.transpose() * xi;
  const double c = (1.0 - R) / (1.0 + R);
  double value = 1.0;
  for (int j = 0; j < frame.n(); ++j) {
    const double x2 = X(2 * j) * X(2 * j) + X(2 * j + 1) * X(2 * j + 1);
    value *= 2.0 / (1.0 + R) * std::exp(-c * x2 / (4.0 * frame.mu(j)));
  }
  return value;
}

cd abel_partial(const FourierFunction& fhat, const StepTwoGroup& g, const TauFrame& frame,
                double R, const VectorXd& y, const AbelQuadrature& q) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("0 < R < 1", "Abel parameter R outside (0, 1)");
  const int m = g.m();
  const VectorXd center = 2.0 * b_tau(g, frame.tau) * y;
  const double sd = std::sqrt(2.0 * frame.mu(0) * (1.0 + R) / (1.0 - R));
  std::vector<Rule1D> rules;
  for (int a = 0; a < m; ++a) {
    const double lo = std::max(-q.xi_half_width, center(a) - q.width_factor * sd);
    const double hi = std::min(q.xi_half_width, center(a) + q.width_factor * sd);
    if (!(hi > lo)) return 0.0;
    rules.push_back(trapezoid(lo, hi, q.xi_nodes));
  }
  cd acc = 0.0;
  for_each_node(rules, [&](const VectorXd& eta, double w) {
    acc += w * std::exp(kI * y.dot(eta)) * fhat(eta, frame.tau) *
           abel_multiplier(frame, R, eta - center);
  });
  return acc * std::pow(2.0 * std::numbers::pi, -m);
}

std::vector<cd> abel_partial_direct(const SampledField& f_tilde, const StepTwoGroup& g,
                                    const TauFrame& frame, double R, int K,
                                    const std::vector<std::size_t>& nodes) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("0 < R < 1", "Abel parameter R outside (0, 1)");
  const int n = g.n();
  // Enumerate k in Z_{>=0}^n with |k| <= K.
  std::vector<std::vector<int>> ks{{}};
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& k : ks) {
      int used = 0;
      for (int v : k) used += v;
      for (int v = 0; v + used <= K; ++v) {
        auto e = k;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    }
    ks = std::move(next);
  }
  const SampledField phi = sample_field(f_tilde.axes(), [&](const VectorXd& x) {
    const Eigen::VectorXcd z = complex_tau_coordinates(frame, x);
    cd s = 0.0;
    for (const auto& k : ks) {
      int total = 0;
      for (int v : k) total += v;
      s += std::pow(R, total) *
           exp_laguerre_z(frame.mu, MultiIndexPair::raw(k, std::vector<int>(n, 0)), z);
    }
    return s;
  });
  return twisted_convolve_at(f_tilde, phi, g, frame.tau, nodes);
}

std::vector<cd> abel_approx_identity(const FourierFunction& fhat, const StepTwoGroup& g, double R,
                                     const std::vector<GroupPoint>& points,
                                     const AbelQuadrature& q) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("0 < R < 1", "Abel parameter R outside (0, 1)");
  for (const GroupPoint& p : points) g.check_point(p);
  const TauRule rule = tau_rule(g.r(), q);
  std::vector<TauFrame> frames(rule.nodes.size());
  parallel_for(frames.size(), [&](std::size_t i) { frames[i] = normalize(g, rule.nodes[i]); });
  const std::size_t T = rule.nodes.size();
  std::vector<cd> terms(points.size() * T);
  parallel_for(terms.size(), [&](std::size_t idx) {
    const std::size_t p = idx / T, i = idx % T;
    terms[idx] = rule.weights[i] * std::exp(kI * points[p].t.dot(rule.nodes[i])) *
                 abel_partial(fhat, g, frames[i], R, points[p].y, q);
  });
  std::vector<cd> out(points.size());
  const double scale = std::pow(2.0 * std::numbers::pi, -g.r());
  for (std::size_t p = 0; p < points.size(); ++p)
    out[p] = scale * pairwise_sum(std::span<const cd>(terms.data() + p * T, T));
  return out;
}

SampledField abel_approx_identity(const SampledField& f, const StepTwoGroup& g, double R,
                                  const AbelQuadrature& q) {
  const int m = g.m(), r = g.r();
  if (f.dim() != static_cast<std::size_t>(m + r))
    throw DimensionError("field over R^{2n+r}", "abel_approx_identity: field dimension mismatch");
  std::vector<GroupPoint> points;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const VectorXd z = f.point(i);
    points.push_back({z.head(m), z.tail(r)});
  }
  return SampledField(f.axes(), abel_approx_identity(fourier_of(f, m), g, R, points, q));
}

}  // namespace lagcalc
