#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "lagcalc/field.hpp"
#include "lagcalc/kernels.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/quadrature.hpp"
#include "lagcalc/spectral.hpp"
#include "lagcalc/tensor.hpp"
#include "lagcalc/twisted.hpp"
#include "oracles.hpp"

namespace cli {

using namespace lagcalc;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

struct Check {
  std::string name;
  double metric;
  double threshold;
  bool pass() const { return std::isfinite(metric) && metric <= threshold; }
};

using Suite = std::function<std::vector<Check>(std::mt19937_64&)>;

// ---------------------------------------------------------------------------

std::vector<Check> group_suite(std::mt19937_64& rng) {
  double assoc = 0, inv = 0, dil = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const StepTwoGroup g = oracle::random_group(1 + trial % 3, 1 + trial % 4, rng);
    auto pt = [&] { return GroupPoint{oracle::random_vector(g.m(), rng), oracle::random_vector(g.r(), rng)}; };
    const GroupPoint a = pt(), b = pt(), c = pt();
    const GroupPoint l = multiply(g, multiply(g, a, b), c), r = multiply(g, a, multiply(g, b, c));
    assoc = std::max({assoc, (l.y - r.y).cwiseAbs().maxCoeff(), (l.t - r.t).cwiseAbs().maxCoeff()});
    const GroupPoint e = multiply(g, a, inverse(g, a));
    inv = std::max({inv, e.y.cwiseAbs().maxCoeff(), e.t.cwiseAbs().maxCoeff()});
    const double lam = 0.3 + trial * 0.05;
    const GroupPoint d1 = dilate(g, lam, multiply(g, a, b));
    const GroupPoint d2 = multiply(g, dilate(g, lam, a), dilate(g, lam, b));
    dil = std::max({dil, (d1.y - d2.y).cwiseAbs().maxCoeff(), (d1.t - d2.t).cwiseAbs().maxCoeff()});
  }
  return {{"associativity (40 random groups)", assoc, 1e-12},
          {"a * a^-1 = identity", inv, 1e-12},
          {"dilations are automorphisms", dil, 1e-11}};
}

std::vector<Check> spectral_suite(std::mt19937_64& rng) {
  double nf = 0, orth = 0, hom = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const StepTwoGroup g = oracle::random_group(1 + trial % 4, 1 + trial % 3, rng);
    const VectorXd tau = oracle::random_vector(g.r(), rng);
    const TauFrame f = normalize(g, tau);
    const Eigen::MatrixXd B = b_tau(g, tau);
    const double scale = std::max(1.0, B.norm());
    nf = std::max(nf, (f.O.transpose() * B * f.O - f.J()).cwiseAbs().maxCoeff() / scale);
    orth = std::max(orth, (f.O.transpose() * f.O - Eigen::MatrixXd::Identity(g.m(), g.m())).cwiseAbs().maxCoeff());
    const double lam = 0.5 + 0.1 * (trial % 10);
    hom = std::max(hom, (mu_values(g, lam * tau) - lam * f.mu).cwiseAbs().maxCoeff() / scale);
  }
  return {{"O^T B^tau O = J (60 random forms)", nf, 1e-12},
          {"O orthogonal", orth, 1e-12},
          {"mu(lambda tau) = lambda mu(tau)", hom, 1e-12}};
}

std::vector<Check> laguerre_suite(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> S(0.0, 12.0);
  double rec = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int p = trial % 6;
    const double s = S(rng);
    const auto ref = oracle::laguerre_generating(12, p, s);
    for (int k = 0; k <= 12; ++k)
      rec = std::max(rec, std::abs(laguerre_poly(k, p, s) - ref[k]) / std::max(1.0, std::abs(ref[k])));
  }

  const Rule1D rule = gauss_legendre(160, 0.0, 80.0);
  double orth = 0;
  for (int p = 0; p <= 4; ++p)
    for (int k = 0; k <= 6; ++k)
      for (int m = k; m <= 6; ++m) {
        double s = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
          s += rule.weights[i] * laguerre_l(k, p, rule.nodes[i]) * laguerre_l(m, p, rule.nodes[i]);
        orth = std::max(orth, std::abs(s - (k == m ? 1.0 : 0.0)));
      }

  // Z and Zbar against Ridders differences along the frame in a random group.
  const StepTwoGroup g = oracle::random_group(2, 1, rng);
  const TauFrame f = normalize(g, VectorXd::Constant(1, 0.9));
  std::uniform_int_distribution<int> K(0, 3), P(-3, 3), J(0, 1);
  double shift = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const MultiIndexPair idx = MultiIndexPair::raw({K(rng), K(rng)}, {P(rng), P(rng)});
    const int j = J(rng);
    const VectorXd y = oracle::random_vector(4, rng, 0.8);
    auto F = [&](const VectorXd& v) { return exp_laguerre(f, idx, v); };
    const VectorXd ex = f.O.col(2 * j), ey = f.O.col(2 * j + 1);
    const cd dx = oracle::ridders_derivative([&](double s) { return F(y + s * ex); }, 0.0, 0.1);
    const cd dy = oracle::ridders_derivative([&](double s) { return F(y + s * ey); }, 0.0, 0.1);
    const cd z = complex_tau_coordinates(f, y)(j);
    for (ShiftOp op : {ShiftOp::Z, ShiftOp::Zbar}) {
      const cd applied = op == ShiftOp::Z ? 0.5 * (dx - cd(0, 1) * dy) - f.mu(j) * std::conj(z) * F(y)
                                          : 0.5 * (dx + cd(0, 1) * dy) + f.mu(j) * z * F(y);
      cd expected = 0.0;
      if (const auto res = shift_apply(f, op, j, idx); std::holds_alternative<Shifted>(res)) {
        const Shifted& s = std::get<Shifted>(res);
        expected = s.coefficient * exp_laguerre(f, s.index, y);
      }
      shift = std::max(shift, std::abs(applied - expected) / std::max(1e-3, std::abs(expected)));
    }
  }
  return {{"recurrence vs generating function", rec, 1e-10},
          {"orthonormality k,m <= 6, p <= 4", orth, 1e-8},
          {"shift rules vs finite differences", shift, 1e-5}};
}

std::vector<Check> twisted_suite(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> T(0.6, 1.2);
  const double tau = T(rng);
  const std::vector<Axis> axes(2, centered_axis(80, 0.16));
  const SampledField probe(axes);
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < probe.size(); i += 41)
    if (probe.point(i).norm() <= 2.5) nodes.push_back(i);

  auto basis = [&](int p, int k) {
    return sample_field(axes, [=](const VectorXd& y) {
      return exp_laguerre_2d(std::min(p, k) - 1, p - k, y(0), y(1), tau);
    });
  };
  std::uniform_int_distribution<int> I(1, 3);
  double prod = 0;
  for (int c = 0; c < 4; ++c) {
    const int k = I(rng), p = I(rng), q = c % 2 ? k : I(rng), m = I(rng);
    const auto out = twisted_convolve_1d_at(basis(p, k), basis(q, m), tau, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const VectorXd y = probe.point(nodes[i]);
      const cd expected = k == q ? exp_laguerre_2d(std::min(p, m) - 1, p - m, y(0), y(1), tau) : cd(0.0);
      prod = std::max(prod, std::abs(out[i] - expected));
    }
  }

  // tau = 0 reduces to Euclidean convolution of Gaussians.
  const double a = 1.0 + std::uniform_real_distribution<double>(0, 1)(rng), b = 1.5;
  const std::vector<Axis> ax48(2, centered_axis(48, 0.25));
  const SampledField f = sample_field(ax48, [&](const VectorXd& y) { return cd(std::exp(-a * y.squaredNorm())); });
  const SampledField h = sample_field(ax48, [&](const VectorXd& y) { return cd(std::exp(-b * y.squaredNorm())); });
  std::vector<std::size_t> inner;
  for (std::size_t i = 0; i < f.size(); i += 7)
    if (f.point(i).norm() <= 3.0) inner.push_back(i);
  const auto euc = twisted_convolve_at(f, h, preset("heisenberg-1"), VectorXd::Zero(1), inner);
  double eucl = 0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const double y2 = f.point(inner[i]).squaredNorm();
    eucl = std::max(eucl, std::abs(euc[i] - std::numbers::pi / (a + b) * std::exp(-a * b / (a + b) * y2)));
  }
  return {{"product rule of basis functions", prod, 1e-8}, {"tau = 0 is Euclidean convolution", eucl, 1e-10}};
}

std::vector<Check> tensor_suite(std::mt19937_64& rng) {
  const double tau = std::uniform_real_distribution<double>(0.7, 1.1)(rng);
  const StepTwoGroup h1 = preset("heisenberg-1");
  const TauFrame frame = normalize(h1, VectorXd::Constant(1, tau));
  const std::vector<Axis> axes(2, centered_axis(64, 0.2));
  const int K = 6;

  // Basis functions map to indicator tensors.
  double ind = 0;
  std::uniform_int_distribution<int> I(1, K);
  for (int trial = 0; trial < 3; ++trial) {
    const MultiIndexPair addr = MultiIndexPair::basis({I(rng)}, {I(rng)});
    const SampledField f = sample_field(axes, [&](const VectorXd& y) { return exp_laguerre(frame, addr, y); });
    const LaguerreTensor T = laguerre_coefficients(f, frame, K);
    ind = std::max(ind, (T.F - indicator_tensor(frame, K, addr).F).cwiseAbs().maxCoeff());
  }

  // Identity is a two-sided unit.
  const LaguerreTensor Id = identity_tensor(frame, K);
  LaguerreTensor R = zero_tensor(frame, K);
  std::normal_distribution<double> N(0.0, 1.0);
  for (Eigen::Index i = 0; i < R.F.size(); ++i) R.F(i) = cd(N(rng), N(rng));
  const double unit = std::max((tensor_multiply(Id, R).F - R.F).cwiseAbs().maxCoeff(),
                               (tensor_multiply(R, Id).F - R.F).cwiseAbs().maxCoeff());
  return {{"basis functions give indicator tensors", ind, 1e-8}, {"identity tensor is a unit", unit, 1e-14}};
}

std::vector<Check> kernels_suite(std::mt19937_64& rng) {
  FsQuadrature q;
  q.tol = 1e-10;
  const FundamentalSolver h1(preset("heisenberg-1"), q);
  double heis = 0;
  for (int trial = 0; trial < 4; ++trial) {
    const VectorXd y = oracle::random_vector(2, rng);
    const VectorXd t = oracle::random_vector(1, rng, 0.7);
    const double expected = 1.0 / std::sqrt(std::pow(y.squaredNorm(), 2) + t(0) * t(0));
    heis = std::max(heis, std::abs(h1.evaluate(y, t).value - expected) / expected);
  }
  const FundamentalSolver qh(preset("quaternionic-heisenberg"), q);
  double quat = 0;
  for (int trial = 0; trial < 2; ++trial) {
    const VectorXd y = oracle::random_vector(4, rng).normalized() * (0.8 + 0.3 * trial);
    const double expected = 8.0 / (std::numbers::pi * std::pow(y.norm(), 8));
    quat = std::max(quat, std::abs(qh.evaluate(y, VectorXd::Zero(3)).value - expected) / expected);
  }
  const Eigen::MatrixXcd S = szego_kernel(1, Eigen::Vector4d(1, 0, 0, 0), VectorXd::Zero(3));
  const double c = 24.0 / std::pow(std::numbers::pi, 4);
  const double sz = (S - c * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() / c;

  const TauFrame f = normalize(oracle::random_group(2, 2, rng), oracle::random_vector(2, rng));
  const SubLaplacianSymbol sym = sublap_symbol(f, 3);
  const double expected = f.mu(0) * 5 + f.mu(1) * 3;
  const double symv = std::abs(sym.value({2, 1}) - expected) / expected;
  return {{"Heisenberg Psi vs closed form", heis, 1e-8},
          {"quaternionic Psi(y, 0) vs closed form", quat, 1e-6},
          {"Szego kernel S_1(e_1, 0)", sz, 1e-8},
          {"sub-Laplacian symbol value", symv, 1e-14}};
}

const std::vector<std::pair<std::string, Suite>>& registry() {
  static const std::vector<std::pair<std::string, Suite>> r = {
      {"group", group_suite},     {"spectral", spectral_suite}, {"laguerre", laguerre_suite},
      {"twisted", twisted_suite}, {"tensor", tensor_suite},     {"kernels", kernels_suite}};
  return r;
}

}  // namespace

std::vector<std::string> selftest_suites() {
  std::vector<std::string> names{"all"};
  for (const auto& [name, suite] : registry()) names.push_back(name);
  return names;
}

int run_selftest(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%-9s %-42s %-10s %-10s %s\n", "suite", "check", "metric", "bound",
                "result");
  out << line;
  int passed = 0, total = 0;
  for (std::size_t s = 0; s < registry().size(); ++s) {
    const auto& [name, run] = registry()[s];
    if (suite != "all" && suite != name) continue;
    // Each suite gets its own stream so results do not depend on which suites ran before.
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    for (const Check& c : run(rng)) {
      std::snprintf(line, sizeof line, "%-9s %-42s %.3e  %.3e  %s\n", name.c_str(), c.name.c_str(), c.metric,
                    c.threshold, c.pass() ? "PASS" : "FAIL");
      out << line;
      ++total;
      passed += c.pass() ? 1 : 0;
    }
  }
  out << passed << "/" << total << " checks passed (seed " << seed << ")\n";
  return passed == total ? 0 : 1;
}

}  // namespace cli
