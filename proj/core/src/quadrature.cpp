#include "lagcalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "lagcalc/error.hpp"

namespace lagcalc {
namespace {

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
Rule1D legendre_reference(int n) {
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const Rule1D& cached_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, Rule1D> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, legendre_reference(n)).first;
  return it->second;
}

template <class T>
T pairwise_sum_impl(std::span<const T> v) {
  if (v.size() <= 8) {
    T s{};
    for (const auto& x : v) s += x;
    return s;
  }
  const std::size_t mid = v.size() / 2;
  return pairwise_sum_impl(v.subspan(0, mid)) + pairwise_sum_impl(v.subspan(mid));
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("n >= 1", "gauss_legendre: need at least one node");
  const Rule1D& ref = cached_legendre(n);
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = c + h * ref.nodes[i];
    rule.weights[i] = h * ref.weights[i];
  }
  return rule;
}

Rule1D trapezoid(double a, double b, int n) {
  if (n < 2) throw DomainError("n >= 2", "trapezoid: need at least two nodes");
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, (b - a) / (n - 1));
  for (int i = 0; i < n; ++i) rule.nodes[i] = a + (b - a) * i / (n - 1);
  rule.weights.front() *= 0.5;
  rule.weights.back() *= 0.5;
  return rule;
}

Rule1D composite_gauss_legendre(std::span<const double> breaks, int nodes_per_panel) {
  Rule1D rule;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Rule1D panel = gauss_legendre(nodes_per_panel, breaks[i], breaks[i + 1]);
    rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return rule;
}

Rule1D graded_symmetric(double half_width, double smallest_panel, int nodes_per_panel) {
  if (!(half_width > 0.0) || !(smallest_panel > 0.0) || smallest_panel >= half_width)
    throw DomainError("0 < smallest_panel < half_width", "graded_symmetric: bad panel sizes");
  std::vector<double> positive{0.0};
  for (double x = smallest_panel; x < half_width; x *= 4.0) positive.push_back(x);
  positive.push_back(half_width);
  std::vector<double> breaks;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) breaks.push_back(-*it);
  breaks.insert(breaks.end(), positive.begin() + 1, positive.end());
  return composite_gauss_legendre(breaks, nodes_per_panel);
}

double sphere_area(int r) {
  // 2 pi^{r/2} / Gamma(r/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * r) / std::tgamma(0.5 * r);
}

SphereRule sphere_rule(int r, int order) {
  if (r < 1 || order < 1) throw DomainError("r >= 1, order >= 1", "sphere_rule: bad arguments");
  SphereRule rule;
  if (r == 1) {
    rule.directions = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  if (r == 2) {
    const int m = std::max(order, 3);
    for (int i = 0; i < m; ++i) {
      const double phi = 2.0 * std::numbers::pi * (i + 0.5) / m;
      Eigen::VectorXd d(2);
      d << std::cos(phi), std::sin(phi);
      rule.directions.push_back(d);
      rule.weights.push_back(2.0 * std::numbers::pi / m);
    }
    return rule;
  }
  if (r == 3) {
    const Rule1D polar = gauss_legendre(order, -1.0, 1.0);
    const SphereRule circle = sphere_rule(2, 2 * order);
    for (std::size_t i = 0; i < polar.size(); ++i) {
      const double c = polar.nodes[i], s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (std::size_t j = 0; j < circle.size(); ++j) {
        Eigen::VectorXd d(3);
        d << c, s * circle.directions[j](0), s * circle.directions[j](1);
        rule.directions.push_back(d);
        rule.weights.push_back(polar.weights[i] * circle.weights[j]);
      }
    }
    return rule;
  }
  // Polar variable c = cos(theta) carries the weight (1 - c^2)^{(r-3)/2}. For odd r that
  // is a polynomial and plain Gauss-Legendre is exact; for even r one factor sqrt(1 - c^2)
  // is absorbed by Gauss-Chebyshev of the second kind.
  std::vector<double> cs, ws;
  if (r % 2 == 1) {
    const Rule1D gl = gauss_legendre(order + (r - 3) / 2, -1.0, 1.0);
    for (std::size_t i = 0; i < gl.size(); ++i) {
      cs.push_back(gl.nodes[i]);
      ws.push_back(gl.weights[i] * std::pow(1.0 - gl.nodes[i] * gl.nodes[i], (r - 3) / 2));
    }
  } else {
    const int m = order + (r - 4) / 2;
    for (int i = 1; i <= m; ++i) {
      const double a = std::numbers::pi * i / (m + 1);
      const double c = std::cos(a), s2 = std::sin(a) * std::sin(a);
      cs.push_back(c);
      ws.push_back(std::numbers::pi / (m + 1) * s2 * std::pow(s2, (r - 4) / 2));
    }
  }
  const SphereRule lower = sphere_rule(r - 1, order);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - cs[i] * cs[i]));
    for (std::size_t j = 0; j < lower.size(); ++j) {
      Eigen::VectorXd d(r);
      d(0) = cs[i];
      d.tail(r - 1) = s * lower.directions[j];
      rule.directions.push_back(d);
      rule.weights.push_back(ws[i] * lower.weights[j]);
    }
  }
  return rule;
}

double pairwise_sum(std::span<const double> values) { return pairwise_sum_impl(values); }

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) {
  return pairwise_sum_impl(values);
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol, int max_panels) {
  std::priority_queue<Panel> heap;
  Panel first = gk15(f, a, b);
  double value = first.value, error = first.error;
  int evaluations = 15;
  heap.push(first);
  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (static_cast<int>(heap.size()) >= max_panels)
      throw ConvergenceError("quadrature converges",
                             "integrate_adaptive: panel budget exhausted before tolerance");
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
    evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (worst.b - worst.a < 1e-14 * std::max(1.0, std::abs(b - a))) break;
  }
  // Re-sum the panels for a value free of the running-update drift.
  std::vector<double> values, errors;
  while (!heap.empty()) {
    values.push_back(heap.top().value);
    errors.push_back(heap.top().error);
    heap.pop();
  }
  return {pairwise_sum(values), pairwise_sum(errors), evaluations};
}

}  // namespace lagcalc
