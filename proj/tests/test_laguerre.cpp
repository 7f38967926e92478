#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lagcalc/error.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/quadrature.hpp"
#include "oracles.hpp"

using namespace lagcalc;
using Eigen::VectorXd;
using cd = std::complex<double>;

TEST(Laguerre, SmallValues) {
  for (int p : {0, 1, 5})
    for (double s : {0.0, 0.3, 7.0}) EXPECT_EQ(laguerre_poly(0, p, s), 1.0);
  EXPECT_DOUBLE_EQ(laguerre_poly(1, 0, 2.0), -1.0);
  const auto c = oracle::laguerre_generating(3, 2, 0.7);
  EXPECT_NEAR(laguerre_poly(3, 2, 0.7), c[3], 1e-12 * std::abs(c[3]));
  for (double s : {0.0, 1.0, 4.5}) EXPECT_NEAR(laguerre_l(0, 0, s), std::exp(-s / 2), 1e-15);
  EXPECT_THROW(laguerre_poly(-1, 0, 1.0), DomainError);
  EXPECT_THROW(laguerre_l(0, 0, -1.0), DomainError);
}

TEST(Laguerre, RecurrenceMatchesGeneratingFunction) {
  for (int p = 0; p <= 6; ++p)
    for (double s : {0.1, 1.0, 5.0}) {
      const auto c = oracle::laguerre_generating(12, p, s);
      for (int k = 0; k <= 12; ++k) {
        const double v = laguerre_poly(k, p, s);
        EXPECT_LE(std::abs(v - c[k]), 1e-10 * std::max(1.0, std::abs(c[k]))) << k << " " << p;
        EXPECT_NEAR(v, oracle::laguerre_explicit(k, p, s), 1e-9 * std::max(1.0, std::abs(v)));
      }
    }
}

TEST(Laguerre, LargeOrderIsFinite) {
  const double v = laguerre_l(40, 30, 10.0);
  EXPECT_TRUE(std::isfinite(v));
  // Extended-precision explicit sum as the reference; the alternating terms reach about
  // 1e20 here, so double precision alone would not resolve the value.
  long double sum = 0.0L;
  for (int m = 0; m <= 40; ++m)
    sum += ((m % 2) ? -1.0L : 1.0L) *
           std::exp(std::lgamma(71.0L) - std::lgamma(41.0L - m) - std::lgamma(31.0L + m) -
                    std::lgamma(m + 1.0L) + m * std::log(10.0L));
  const long double ref =
      std::sqrt(std::exp(std::lgamma(41.0L) - std::lgamma(71.0L))) * sum * std::exp(15.0L * std::log(10.0L) - 5.0L);
  EXPECT_NEAR(v, static_cast<double>(ref), 1e-6 * std::max(1.0, std::abs(static_cast<double>(ref))));
}

TEST(Laguerre, Orthonormality) {
  for (int p = 0; p <= 4; ++p)
    for (int k = 0; k <= 6; ++k)
      for (int m = k; m <= 6; ++m) {
        const auto res = integrate_adaptive(
            [&](double s) { return laguerre_l(k, p, s) * laguerre_l(m, p, s); }, 0.0, 200.0, 1e-13,
            1e-13);
        EXPECT_NEAR(res.value, k == m ? 1.0 : 0.0, 1e-8) << k << " " << m << " " << p;
      }
}

TEST(Laguerre, DerivativeIdentity) {
  for (int p = 0; p <= 3; ++p)
    for (int k = 1; k <= 6; ++k)
      for (double s : {0.2, 1.5, 6.0}) {
        const cd d = oracle::ridders_derivative(
            [&](double x) { return cd(laguerre_poly(k, p, x)); }, s, 0.1);
        EXPECT_NEAR(d.real(), -laguerre_poly(k - 1, p + 1, s), 1e-8 * std::max(1.0, std::abs(d)));
      }
}

TEST(Laguerre, ExpLaguerre2d) {
  const double tau = 1.3;
  for (double y1 : {0.0, 0.4, -1.1})
    for (double y2 : {0.0, 0.7}) {
      const cd v = exp_laguerre_2d(0, 0, y1, y2, tau);
      EXPECT_NEAR(std::abs(v - 2 * tau / std::numbers::pi * std::exp(-tau * (y1 * y1 + y2 * y2))),
                  0.0, 1e-15);
    }
  EXPECT_EQ(exp_laguerre_2d(2, 3, 0.0, 0.0, tau), cd(0.0));
  // l_k^{(0)}(0) = L_k^{(0)}(0) = 1.
  EXPECT_NEAR(exp_laguerre_2d(2, 0, 0.0, 0.0, tau).real(), 2 * tau / std::numbers::pi, 1e-14);
  // Rotation equivariance.
  const double a = 0.83;
  for (int p : {-3, -1, 0, 2}) {
    const double y1 = 0.5, y2 = -0.3;
    const cd v = exp_laguerre_2d(1, p, y1, y2, tau);
    const cd w = exp_laguerre_2d(1, p, std::cos(a) * y1 - std::sin(a) * y2,
                                 std::sin(a) * y1 + std::cos(a) * y2, tau);
    EXPECT_NEAR(std::abs(w - v * std::exp(cd(0, p * a))), 0.0, 1e-14);
  }
  // Sign convention (sgn p)^p for negative p.
  EXPECT_NEAR(exp_laguerre_2d(1, -1, 0.5, 0.0, tau).real(),
              -exp_laguerre_2d(1, 1, 0.5, 0.0, tau).real(), 1e-15);
  EXPECT_THROW(exp_laguerre_2d(0, 0, 1.0, 0.0, 0.0), DomainError);
}

TEST(Laguerre, ExpLaguerre2dNorm) {
  // In polar form the squared norm is (2 tau / pi)^2 * pi / (2 tau) * int l^2 = 2 tau / pi.
  const double tau = 0.8;
  const Rule1D r = trapezoid(-9.0, 9.0, 241);
  for (int k : {0, 2})
    for (int p : {-2, 0, 1}) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j)
          s += r.weights[i] * r.weights[j] *
               std::norm(exp_laguerre_2d(k, p, r.nodes[i], r.nodes[j], tau));
      EXPECT_NEAR(s, 2 * tau / std::numbers::pi, 1e-8);
    }
}

TEST(Laguerre, MultiIndexValidation) {
  EXPECT_THROW(MultiIndexPair::basis({0}, {1}).validate(), DomainError);
  EXPECT_THROW(MultiIndexPair::raw({-1}, {0}).validate(), DomainError);
  EXPECT_THROW(MultiIndexPair::raw({1, 2}, {0}).validate(), DimensionError);
  const MultiIndexPair b = MultiIndexPair::basis({3, 1}, {2, 2});
  const MultiIndexPair r = b.to_raw();
  EXPECT_EQ(r.k, (std::vector<int>{1, 0}));
  EXPECT_EQ(r.p, (std::vector<int>{1, -1}));
}

TEST(Laguerre, ExpLaguerreGroundStateAndNorm) {
  const StepTwoGroup q = preset("quaternionic-heisenberg");
  const VectorXd tau = (VectorXd(3) << 0.3, -0.5, 0.4).finished();
  const TauFrame f = normalize(q, tau);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 5; ++i) {
    const VectorXd y = oracle::random_vector(4, rng);
    const Eigen::VectorXcd z = complex_tau_coordinates(f, y);
    double expected = 1.0;
    for (int j = 0; j < 2; ++j)
      expected *= 2 * f.mu(j) / std::numbers::pi * std::exp(-f.mu(j) * std::norm(z(j)));
    EXPECT_NEAR(std::abs(exp_laguerre(f, MultiIndexPair::raw({0, 0}, {0, 0}), y) - expected), 0.0,
                1e-14);
  }
  // Squared L2 norm (2/pi)^n prod mu on a 2n-grid (n = 2).
  const Rule1D r = trapezoid(-6.0, 6.0, 25);
  const MultiIndexPair idx = MultiIndexPair::raw({1, 0}, {-1, 2});
  double s = 0.0;
  VectorXd y(4);
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < r.size(); ++b)
      for (std::size_t c = 0; c < r.size(); ++c)
        for (std::size_t d = 0; d < r.size(); ++d) {
          y << r.nodes[a], r.nodes[b], r.nodes[c], r.nodes[d];
          s += r.weights[a] * r.weights[b] * r.weights[c] * r.weights[d] *
               std::norm(exp_laguerre(f, idx, y));
        }
  const double expected = 4.0 / (std::numbers::pi * std::numbers::pi) * f.mu.prod();
  EXPECT_NEAR(s, expected, 1e-6 * expected);
}

TEST(Laguerre, ExpLaguerreL1NormOfGroundState) {
  const StepTwoGroup h = preset("heisenberg-1");
  const TauFrame f = normalize(h, VectorXd::Constant(1, 1.7));
  const Rule1D r = trapezoid(-7.0, 7.0, 201);
  double s = 0.0;
  VectorXd y(2);
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < r.size(); ++b) {
      y << r.nodes[a], r.nodes[b];
      s += r.weights[a] * r.weights[b] * std::abs(exp_laguerre(f, MultiIndexPair::raw({0}, {0}), y));
    }
  // The ground state is (2 mu / pi) e^{-mu |y|^2}, whose L1 norm is 2 independent of mu;
  // in slot variables this is the polar integral of l_0^{(0)} = e^{-sigma/2}.
  const auto l1 = integrate_adaptive([](double x) { return std::exp(-x / 2); }, 0.0, 100.0, 1e-14,
                                     1e-14);
  EXPECT_NEAR(s, l1.value, 1e-10);
}

TEST(Laguerre, FrameConsistencyUnderSignFlip) {
  std::mt19937_64 rng(37);
  const StepTwoGroup g = oracle::random_group(2, 2, rng);
  const TauFrame f = normalize(g, oracle::random_vector(2, rng));
  TauFrame flipped = f;
  flipped.O = -f.O;
  const MultiIndexPair idx = MultiIndexPair::raw({2, 1}, {1, -3});
  for (int i = 0; i < 5; ++i) {
    const VectorXd y = oracle::random_vector(4, rng);
    EXPECT_NEAR(std::abs(exp_laguerre(f, idx, y) - exp_laguerre(flipped, idx, -y)), 0.0, 1e-14);
  }
}

TEST(Laguerre, ShiftRuleCases) {
  const double mu = 1.4;
  const auto zbar0 = shift_apply_mu(mu, ShiftOp::Zbar, 0, MultiIndexPair::raw({0}, {0}));
  EXPECT_TRUE(std::holds_alternative<Annihilated>(zbar0));
  const auto z0 = shift_apply_mu(mu, ShiftOp::Z, 0, MultiIndexPair::raw({0}, {0}));
  ASSERT_TRUE(std::holds_alternative<Shifted>(z0));
  EXPECT_NEAR(std::get<Shifted>(z0).coefficient, std::sqrt(2 * mu), 1e-15);
  EXPECT_EQ(std::get<Shifted>(z0).index, MultiIndexPair::raw({0}, {-1}));
  const auto zb = shift_apply_mu(mu, ShiftOp::Zbar, 0, MultiIndexPair::raw({3}, {-2}));
  EXPECT_NEAR(std::get<Shifted>(zb).coefficient, -std::sqrt(2 * mu * 5), 1e-14);
  EXPECT_EQ(std::get<Shifted>(zb).index, MultiIndexPair::raw({3}, {-1}));
}

TEST(Laguerre, CompositeShiftGivesSubLaplacianEigenvalue) {
  std::mt19937_64 rng(41);
  const StepTwoGroup g = oracle::random_group(3, 2, rng);
  const TauFrame f = normalize(g, oracle::random_vector(2, rng));
  auto apply = [&](ShiftOp a, ShiftOp b, int j, const MultiIndexPair& idx) {
    const auto first = shift_apply(f, b, j, idx);
    if (std::holds_alternative<Annihilated>(first)) return std::pair{0.0, idx};
    const Shifted s1 = std::get<Shifted>(first);
    const Shifted s2 = std::get<Shifted>(shift_apply(f, a, j, s1.index));
    return std::pair{s1.coefficient * s2.coefficient, s2.index};
  };
  for (int k = 0; k <= 5; ++k)
    for (int j = 0; j < 3; ++j) {
      const MultiIndexPair idx = MultiIndexPair::raw({k, 1, 2}, {0, 0, 0});
      const auto [c1, i1] = apply(ShiftOp::Z, ShiftOp::Zbar, j, idx);
      const auto [c2, i2] = apply(ShiftOp::Zbar, ShiftOp::Z, j, idx);
      const int kj = idx.k[j];
      if (kj > 0) EXPECT_EQ(i1, idx);
      EXPECT_EQ(i2, idx);
      EXPECT_NEAR(-0.5 * (c1 + c2), f.mu(j) * (2 * kj + 1), 1e-12);
    }
}

TEST(Laguerre, ShiftOperatorsMatchFiniteDifferences) {
  // Z = d/dz - mu zbar, Zbar = d/dzbar + mu z in slot j, with z = x + i y along the frame.
  std::mt19937_64 rng(43);
  const StepTwoGroup g = oracle::random_group(2, 1, rng);
  const TauFrame f = normalize(g, VectorXd::Constant(1, 0.9));
  std::uniform_int_distribution<int> K(0, 3), P(-3, 3), J(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const MultiIndexPair idx = MultiIndexPair::raw({K(rng), K(rng)}, {P(rng), P(rng)});
    const int j = J(rng);
    for (ShiftOp op : {ShiftOp::Z, ShiftOp::Zbar}) {
      const auto res = shift_apply(f, op, j, idx);
      for (int pt = 0; pt < 4; ++pt) {
        const VectorXd y = oracle::random_vector(4, rng, 0.8);
        const VectorXd ex = f.O.col(2 * j), ey = f.O.col(2 * j + 1);
        auto F = [&](const VectorXd& v) { return exp_laguerre(f, idx, v); };
        const cd dx = oracle::ridders_derivative([&](double s) { return F(y + s * ex); }, 0.0, 0.1);
        const cd dy = oracle::ridders_derivative([&](double s) { return F(y + s * ey); }, 0.0, 0.1);
        const cd z = complex_tau_coordinates(f, y)(j);
        const double mu = f.mu(j);
        cd applied;
        if (op == ShiftOp::Z)
          applied = 0.5 * (dx - cd(0, 1) * dy) - mu * std::conj(z) * F(y);
        else
          applied = 0.5 * (dx + cd(0, 1) * dy) + mu * z * F(y);
        cd expected = 0.0;
        if (std::holds_alternative<Shifted>(res)) {
          const Shifted s = std::get<Shifted>(res);
          expected = s.coefficient * exp_laguerre(f, s.index, y);
        }
        if (std::abs(expected) > 1e-6)
          EXPECT_LT(std::abs(applied - expected) / std::abs(expected), 1e-5);
        else
          EXPECT_LT(std::abs(applied - expected), 1e-8);
      }
    }
  }
}
