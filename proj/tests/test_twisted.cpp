#include <cmath>
#include <numbers>
#include <array>
#include <random>

#include <gtest/gtest.h>

#include "lagcalc/error.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/twisted.hpp"
#include "oracles.hpp"

using namespace lagcalc;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

std::vector<Axis> square_grid(std::size_t count, double h, int dims = 2) {
  return std::vector<Axis>(dims, centered_axis(count, h));
}

/// Basis function of one complex slot at the address (p, k), entries >= 1.
SampledField slot_basis(const std::vector<Axis>& axes, int p, int k, double tau) {
  return sample_field(axes, [=](const VectorXd& y) {
    return exp_laguerre_2d(std::min(p, k) - 1, p - k, y(0), y(1), tau);
  });
}

/// Flat indices of nodes within `radius` of the origin, thinned by `every`.
std::vector<std::size_t> inner_nodes(const SampledField& f, double radius, std::size_t every) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.point(i).norm() <= radius && i % every == 0) out.push_back(i);
  return out;
}

SampledField gaussian_mixture(const std::vector<Axis>& axes, std::mt19937_64& rng, int terms) {
  std::vector<oracle::Gaussian> gs;
  std::uniform_real_distribution<double> A(0.6, 2.0), C(-0.8, 0.8), W(-1.0, 1.0);
  for (int i = 0; i < terms; ++i) {
    VectorXd c(axes.size());
    for (auto& v : c) v = C(rng);
    gs.push_back({A(rng), c, cd(W(rng), W(rng))});
  }
  return sample_field(axes, [gs](const VectorXd& y) {
    cd s = 0.0;
    for (const auto& g : gs) s += g(y);
    return s;
  });
}

}  // namespace

TEST(Twisted, ZeroFrequencyIsEuclideanConvolution) {
  const StepTwoGroup h1 = preset("heisenberg-1");
  const auto axes = square_grid(48, 0.25);
  const double a = 1.0, b = 2.0;
  const SampledField f = sample_field(axes, [&](const VectorXd& y) { return cd(std::exp(-a * y.squaredNorm())); });
  const SampledField g = sample_field(axes, [&](const VectorXd& y) { return cd(std::exp(-b * y.squaredNorm())); });
  const auto nodes = inner_nodes(f, 3.0, 7);
  const auto out = twisted_convolve_at(f, g, h1, VectorXd::Zero(1), nodes);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const double y2 = f.point(nodes[q]).squaredNorm();
    const double expected = std::numbers::pi / (a + b) * std::exp(-a * b / (a + b) * y2);
    EXPECT_NEAR(std::abs(out[q] - expected), 0.0, 1e-10);
  }
}

TEST(Twisted, GroundStateIsIdempotent) {
  const StepTwoGroup h1 = preset("heisenberg-1");
  const double tau = 1.0;
  const TauFrame frame = normalize(h1, VectorXd::Constant(1, tau));
  const auto axes = square_grid(64, 0.2);
  const SampledField L0 = sample_field(axes, [&](const VectorXd& y) {
    return exp_laguerre(frame, MultiIndexPair::raw({0}, {0}), y);
  });
  const auto nodes = inner_nodes(L0, 3.0, 5);
  const auto out = twisted_convolve_at(L0, L0, h1, VectorXd::Constant(1, tau), nodes);
  for (std::size_t q = 0; q < nodes.size(); ++q)
    EXPECT_NEAR(std::abs(out[q] - L0[nodes[q]]), 0.0, 1e-10);
}

TEST(Twisted, ProductRuleSample) {
  // The full 81-case sweep lives in the acceptance suite; here a few representative cases.
  const double tau = 0.8;
  const auto axes = square_grid(96, 0.15);
  const SampledField probe(axes);
  const auto nodes = inner_nodes(probe, 2.5, 37);
  for (auto [k, p, q, m] : std::vector<std::array<int, 4>>{{1, 1, 1, 1}, {2, 3, 2, 1}, {3, 1, 2, 2}, {1, 2, 1, 3}}) {
    const SampledField A = slot_basis(axes, p, k, tau), B = slot_basis(axes, q, m, tau);
    const auto out = twisted_convolve_1d_at(A, B, tau, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const VectorXd y = probe.point(nodes[i]);
      const cd expected =
          k == q ? exp_laguerre_2d(std::min(p, m) - 1, p - m, y(0), y(1), tau) : cd(0.0);
      EXPECT_NEAR(std::abs(out[i] - expected), 0.0, 1e-8) << k << p << q << m;
    }
  }
}

TEST(Twisted, MinkowskiBound) {
  std::mt19937_64 rng(53);
  const StepTwoGroup h1 = preset("heisenberg-1");
  const auto axes = square_grid(32, 0.3);
  for (int trial = 0; trial < 3; ++trial) {
    const SampledField f = gaussian_mixture(axes, rng, 3), g = gaussian_mixture(axes, rng, 3);
    const SampledField c = twisted_convolve(f, g, h1, VectorXd::Constant(1, 0.7 + trial));
    EXPECT_LE(c.l1_norm(), f.l1_norm() * g.l1_norm() * (1 + 1e-12));
  }
}

TEST(Twisted, Associativity) {
  std::mt19937_64 rng(59);
  const double tau = 0.9;
  const auto axes = square_grid(44, 0.25);
  const SampledField f = gaussian_mixture(axes, rng, 2), g = gaussian_mixture(axes, rng, 2),
                     h = gaussian_mixture(axes, rng, 2);
  const SampledField fg = twisted_convolve_1d(f, g, tau), gh = twisted_convolve_1d(g, h, tau);
  const auto nodes = inner_nodes(f, 1.5, 3);
  const auto left = twisted_convolve_1d_at(fg, h, tau, nodes);
  const auto right = twisted_convolve_1d_at(f, gh, tau, nodes);
  double scale = 0.0;
  for (const cd& v : left) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    EXPECT_LT(std::abs(left[i] - right[i]), 1e-8 * scale);
}

TEST(Twisted, VectorFieldCommutesWithConvolution) {
  // Y~_k = d/dy_k - 2i (B^tau y)_k commutes with left twisted convolution.
  std::mt19937_64 rng(61);
  const StepTwoGroup g = oracle::random_group(1, 1, rng);
  const VectorXd tau = VectorXd::Constant(1, 0.8);
  const Eigen::MatrixXd B = b_tau(g, tau);
  const double h = 0.1;
  const auto axes = square_grid(100, h);
  const oracle::Gaussian fa{1.2, (VectorXd(2) << 0.3, -0.2).finished(), cd(1.0, 0.5)};
  const oracle::Gaussian ga{0.9, (VectorXd(2) << -0.1, 0.4).finished(), cd(0.7, -1.0)};
  const SampledField f = sample_field(axes, fa);
  const SampledField gf = sample_field(axes, ga);
  const SampledField conv = twisted_convolve(f, gf, g, tau);
  for (int k = 0; k < 2; ++k) {
    const SampledField yg = sample_field(axes, [&](const VectorXd& y) {
      const cd dg = -2.0 * ga.a * (y(k) - ga.c(k)) * ga(y);
      return dg - 2.0 * cd(0, 1) * (B * y)(k) * ga(y);
    });
    const SampledField rhs = twisted_convolve(f, yg, g, tau);
    for (std::size_t i0 : {45u, 50u, 56u})
      for (std::size_t i1 : {47u, 52u}) {
        std::vector<std::size_t> idx{i0, i1};
        const std::size_t at = conv.flatten(idx);
        auto shifted = [&](int s) {
          std::vector<std::size_t> j = idx;
          j[k] = static_cast<std::size_t>(static_cast<long>(j[k]) + s);
          return conv[conv.flatten(j)];
        };
        const cd d = (-shifted(2) + 8.0 * shifted(1) - 8.0 * shifted(-1) + shifted(-2)) / (12.0 * h);
        const cd lhs = d - 2.0 * cd(0, 1) * (B * conv.point(at))(k) * conv[at];
        EXPECT_LT(std::abs(lhs - rhs[at]), 1e-3 * std::max(1.0, std::abs(rhs[at])));
      }
  }
}

TEST(Twisted, ProjectionProperty) {
  const double tau = 1.1;
  const StepTwoGroup h1 = preset("heisenberg-1");
  const TauFrame frame = normalize(h1, VectorXd::Constant(1, tau));
  const auto axes = square_grid(64, 0.18);
  std::mt19937_64 rng(67);
  const SampledField f = gaussian_mixture(axes, rng, 2);
  for (int k : {0, 1}) {
    const SampledField L = sample_field(axes, [&](const VectorXd& y) {
      return exp_laguerre(frame, MultiIndexPair::raw({k}, {0}), y);
    });
    const SampledField once = twisted_convolve(f, L, h1, VectorXd::Constant(1, tau));
    const auto nodes = inner_nodes(f, 2.0, 11);
    const auto twice = twisted_convolve_at(once, L, h1, VectorXd::Constant(1, tau), nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      EXPECT_NEAR(std::abs(twice[i] - once[nodes[i]]), 0.0, 1e-8);
  }
}

TEST(Twisted, GridErrors) {
  const StepTwoGroup h1 = preset("heisenberg-1");
  const SampledField a(square_grid(8, 0.5)), b(square_grid(9, 0.5));
  EXPECT_THROW(twisted_convolve(a, b, h1, VectorXd::Constant(1, 1.0)), GridError);
  const SampledField off({Axis{0.1, 1.1, 5}, Axis{0.1, 1.1, 5}});
  EXPECT_THROW(twisted_convolve(off, off, h1, VectorXd::Constant(1, 1.0)), GridError);
}

TEST(Twisted, PartialFourierOfSeparableGaussian) {
  const StepTwoGroup h1 = preset("heisenberg-1");
  const std::vector<Axis> axes{centered_axis(16, 0.5), centered_axis(16, 0.5), centered_axis(40, 0.25)};
  const SampledField phi = sample_field(axes, [](const VectorXd& x) {
    return cd(std::exp(-x.head(2).squaredNorm() - x(2) * x(2)));
  });
  for (double tau : {0.0, 0.7, -1.5}) {
    const SampledField pt = partial_fourier(phi, h1, VectorXd::Constant(1, tau));
    ASSERT_EQ(pt.dim(), 2u);
    for (std::size_t i = 0; i < pt.size(); i += 13) {
      const double y2 = pt.point(i).squaredNorm();
      const double expected = std::exp(-y2) * std::sqrt(std::numbers::pi) * std::exp(-tau * tau / 4);
      EXPECT_NEAR(std::abs(pt[i] - expected), 0.0, 1e-10);
    }
  }
  // Conjugate symmetry for real input.
  const SampledField a = partial_fourier(phi, h1, VectorXd::Constant(1, 0.9));
  const SampledField b = partial_fourier(phi, h1, VectorXd::Constant(1, -0.9));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a[i] - std::conj(b[i])), 0.0, 1e-14);
  // Zero frequency of an s-independent field is the window measure times f (the central
  // rule is the trapezoid rule, so the measure is max - min).
  const SampledField flat = sample_field(axes, [](const VectorXd& x) { return cd(std::exp(-x.head(2).squaredNorm())); });
  const SampledField z = partial_fourier(flat, h1, VectorXd::Zero(1));
  const double measure = axes[2].max - axes[2].min;
  for (std::size_t i = 0; i < z.size(); i += 17)
    EXPECT_NEAR(std::abs(z[i] - measure * std::exp(-z.point(i).squaredNorm())), 0.0, 1e-12);
  EXPECT_THROW(partial_fourier(phi, h1, VectorXd::Constant(1, 20.0)), GridError);
}

TEST(Twisted, IntertwiningOnH1) {
  // partial_fourier(phi * psi) = phi~ *_tau psi~ with phi~, psi~ in closed form.
  const StepTwoGroup h1 = preset("heisenberg-1");
  auto phi = [](const VectorXd& x, const VectorXd& t) {
    return cd(std::exp(-1.3 * (x - Eigen::Vector2d(0.2, 0.0)).squaredNorm() - 0.8 * t(0) * t(0)));
  };
  auto psi = [](const VectorXd& x, const VectorXd& t) {
    return std::exp(cd(-0.9 * x.squaredNorm() - 1.1 * (t(0) - 0.3) * (t(0) - 0.3), 0.4 * x(1)));
  };
  const double tau = 0.75;
  const std::vector<Rule1D> rules{trapezoid(-5, 5, 41), trapezoid(-5, 5, 41), trapezoid(-7, 7, 57)};
  const Rule1D srule = trapezoid(-9, 9, 73);
  const auto axes = square_grid(64, 0.2);
  const SampledField pt = sample_field(axes, [&](const VectorXd& y) {
    return std::sqrt(std::numbers::pi / 0.8) * std::exp(-tau * tau / (4 * 0.8)) *
           std::exp(-1.3 * (y - Eigen::Vector2d(0.2, 0.0)).squaredNorm());
  });
  const SampledField ps = sample_field(axes, [&](const VectorXd& y) {
    return std::sqrt(std::numbers::pi / 1.1) * std::exp(cd(-tau * tau / (4 * 1.1), -0.3 * tau)) *
           std::exp(cd(-0.9 * y.squaredNorm(), 0.4 * y(1)));
  });
  const std::vector<std::size_t> nodes{pt.flatten({32, 32}), pt.flatten({36, 30}), pt.flatten({27, 35})};
  const auto rhs = twisted_convolve_at(pt, ps, h1, VectorXd::Constant(1, tau), nodes);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const VectorXd y = pt.point(nodes[q]);
    std::vector<GroupPoint> pts;
    for (double s : srule.nodes) pts.push_back({y, VectorXd::Constant(1, s)});
    const auto conv = group_convolve(phi, psi, h1, rules, pts);
    cd lhs = 0.0;
    for (std::size_t i = 0; i < srule.size(); ++i)
      lhs += srule.weights[i] * std::exp(cd(0, -tau * srule.nodes[i])) * conv[i];
    EXPECT_LT(std::abs(lhs - rhs[q]), 1e-7 * std::abs(rhs[q]));
  }
}

TEST(Twisted, GroupConvolutionIsNotCommutative) {
  const StepTwoGroup h1 = preset("heisenberg-1");
  auto phi = [](const VectorXd& x, const VectorXd& t) {
    return cd(std::exp(-(x - Eigen::Vector2d(0.5, 0.0)).squaredNorm() - t(0) * t(0)));
  };
  auto psi = [](const VectorXd& x, const VectorXd& t) {
    return cd(std::exp(-(x - Eigen::Vector2d(0.0, 0.5)).squaredNorm() - t(0) * t(0)));
  };
  const std::vector<Rule1D> rules{trapezoid(-5, 5, 31), trapezoid(-5, 5, 31), trapezoid(-6, 6, 37)};
  const std::vector<GroupPoint> pts{{Eigen::Vector2d(0.5, 0.5), VectorXd::Constant(1, 0.3)}};
  const cd ab = group_convolve(phi, psi, h1, rules, pts)[0];
  const cd ba = group_convolve(psi, phi, h1, rules, pts)[0];
  EXPECT_GT(std::abs(ab - ba), 1e-3 * std::abs(ab));
}

TEST(Twisted, NarrowGaussianActsAsIdentity) {
  const StepTwoGroup h1 = preset("heisenberg-1");
  const double eps = 0.05;
  auto delta = [&](const VectorXd& x, const VectorXd& t) {
    return cd(std::exp(-(x.squaredNorm() + t(0) * t(0)) / (eps * eps)) /
              std::pow(std::sqrt(std::numbers::pi) * eps, 3));
  };
  auto psi = [](const VectorXd& x, const VectorXd& t) {
    return cd(std::exp(-x.squaredNorm() - 0.5 * t(0) * t(0)));
  };
  const std::vector<Rule1D> rules{trapezoid(-0.3, 0.3, 41), trapezoid(-0.3, 0.3, 41),
                                  trapezoid(-0.3, 0.3, 41)};
  const GroupPoint p{Eigen::Vector2d(0.4, -0.2), VectorXd::Constant(1, 0.5)};
  const cd v = group_convolve(delta, psi, h1, rules, {p})[0];
  EXPECT_NEAR(std::abs(v - psi(p.y, p.t)), 0.0, 1e-2);
}

TEST(Twisted, FourierPathMatchesDirectGroupConvolution) {
  const StepTwoGroup h1 = preset("heisenberg-1");
  const oracle::Gaussian a{1.0, Eigen::Vector3d(0.2, -0.1, 0.0)}, b{0.8, Eigen::Vector3d(0.0, 0.3, 0.2)};
  auto phi = [&](const VectorXd& x, const VectorXd& t) {
    VectorXd z(3);
    z << x, t;
    return a(z);
  };
  auto psi = [&](const VectorXd& x, const VectorXd& t) {
    VectorXd z(3);
    z << x, t;
    return b(z);
  };
  auto fa = [&](const VectorXd& xi, const VectorXd& tau) {
    VectorXd z(3);
    z << xi, tau;
    return a.fourier(z);
  };
  auto fb = [&](const VectorXd& xi, const VectorXd& tau) {
    VectorXd z(3);
    z << xi, tau;
    return b.fourier(z);
  };
  const std::vector<GroupPoint> pts{{Eigen::Vector2d(0.3, 0.1), VectorXd::Constant(1, -0.2)},
                                    {Eigen::Vector2d(-0.5, 0.4), VectorXd::Constant(1, 0.6)}};
  const std::vector<Rule1D> x_rules(3, trapezoid(-7, 7, 57));
  const auto direct = group_convolve(phi, psi, h1, x_rules, pts);
  const std::vector<Rule1D> xi_rules(2, trapezoid(-14, 14, 57));
  const std::vector<Rule1D> tau_rules{trapezoid(-14, 14, 57)};
  const auto fourier = group_convolve_fourier(fa, fb, h1, xi_rules, tau_rules, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    EXPECT_LT(std::abs(direct[i] - fourier[i]), 1e-4 * std::abs(direct[i]));
  // T_y at y = 0 is the identity and is additive in y.
  const VectorXd xi = Eigen::Vector2d(0.3, -1.2), tau = VectorXd::Constant(1, 0.7);
  EXPECT_EQ(shifted_frequency(h1, Eigen::Vector2d::Zero(), xi, tau), xi);
  const VectorXd y1 = Eigen::Vector2d(0.4, 0.1), y2 = Eigen::Vector2d(-0.2, 0.9);
  EXPECT_LT((shifted_frequency(h1, y1 + y2, xi, tau) -
             (shifted_frequency(h1, y1, shifted_frequency(h1, y2, xi, tau), tau)))
                .norm(),
            1e-14);
}

TEST(Twisted, AbelMultiplier) {
  const StepTwoGroup h2 = preset("heisenberg-2");
  const TauFrame frame = normalize(h2, VectorXd::Constant(1, 1.3));
  for (double R : {0.1, 0.5, 0.9})
    EXPECT_NEAR(abel_multiplier(frame, R, VectorXd::Zero(4)), std::pow(2 / (1 + R), 2), 1e-14);
}

TEST(Twisted, AbelMultiplierPathMatchesDirectPartialSum) {
  // The multiplier form of sum_k R^|k| f~ *_tau L_k^{(0)} against the explicit sum.
  const StepTwoGroup h1 = preset("heisenberg-1");
  const double tau = 0.9, R = 0.3;
  const TauFrame frame = normalize(h1, VectorXd::Constant(1, tau));
  const auto axes = square_grid(64, 0.2);
  const oracle::Gaussian ga{0.7, Eigen::Vector2d(0.3, -0.2)};
  const SampledField ft = sample_field(axes, ga);
  const std::vector<std::size_t> nodes{ft.flatten({32, 32}), ft.flatten({35, 30}), ft.flatten({28, 34})};
  const auto direct = abel_partial_direct(ft, h1, frame, R, 30, nodes);
  AbelQuadrature q;
  q.xi_nodes = 96;
  auto fhat = [&](const VectorXd& xi, const VectorXd&) { return ga.fourier(xi); };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const cd viaMultiplier = abel_partial(fhat, h1, frame, R, ft.point(nodes[i]), q);
    EXPECT_LT(std::abs(viaMultiplier - direct[i]), 1e-6 * std::max(1.0, std::abs(direct[i])));
  }
}

TEST(Twisted, FrequencySidePathMatchesDirectQuadrature) {
  std::mt19937_64 rng(113);
  const StepTwoGroup h1 = preset("heisenberg-1");
  const auto axes = square_grid(40, 0.25);
  const SampledField f = gaussian_mixture(axes, rng, 2), g = gaussian_mixture(axes, rng, 2);
  const VectorXd tau = VectorXd::Constant(1, 0.6);
  const auto nodes = inner_nodes(f, 2.0, 9);
  const auto direct = twisted_convolve_at(f, g, h1, tau, nodes);
  const auto fourier = twisted_convolve_fourier_at(f, g, h1, tau, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    EXPECT_LT(std::abs(direct[i] - fourier[i]), 1e-8) << i;
}
