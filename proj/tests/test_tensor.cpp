#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lagcalc/error.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/tensor.hpp"
#include "lagcalc/twisted.hpp"
#include "oracles.hpp"

using namespace lagcalc;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

struct H1Setup {
  StepTwoGroup g = preset("heisenberg-1");
  double tau = 1.0;
  TauFrame frame = normalize(g, VectorXd::Constant(1, tau));
  std::vector<Axis> axes = std::vector<Axis>(2, centered_axis(64, 0.2));
};

SampledField basis_field(const TauFrame& frame, const std::vector<Axis>& axes,
                         const MultiIndexPair& address) {
  return sample_field(axes, [&](const VectorXd& y) { return exp_laguerre(frame, address, y); });
}

}  // namespace

TEST(Tensor, MultiIndexOrdering) {
  EXPECT_EQ(multi_index_position({1, 1}, 3), 0u);
  EXPECT_EQ(multi_index_position({1, 2}, 3), 1u);
  EXPECT_EQ(multi_index_position({2, 1}, 3), 3u);
  for (std::size_t i = 0; i < 27; ++i) EXPECT_EQ(multi_index_position(multi_index_at(i, 3, 3), 3), i);
  EXPECT_THROW(multi_index_position({0, 1}, 3), DomainError);
  EXPECT_THROW(multi_index_position({4, 1}, 3), DomainError);
}

TEST(Tensor, GroundStateAndBasisFunctionsGiveIndicators) {
  H1Setup s;
  const int K = 6;
  const LaguerreTensor T0 = laguerre_coefficients(
      basis_field(s.frame, s.axes, MultiIndexPair::raw({0}, {0})), s.frame, K);
  EXPECT_NEAR(std::abs(T0.at(MultiIndexPair::basis({1}, {1})) - 1.0), 0.0, 1e-10);
  EXPECT_NEAR((T0.F - indicator_tensor(s.frame, K, MultiIndexPair::basis({1}, {1})).F).cwiseAbs().maxCoeff(),
              0.0, 1e-10);
  for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 1}, {2, 5}, {4, 4}}) {
    const MultiIndexPair addr = MultiIndexPair::basis({p}, {k});
    const LaguerreTensor T = laguerre_coefficients(basis_field(s.frame, s.axes, addr), s.frame, K);
    EXPECT_NEAR((T.F - indicator_tensor(s.frame, K, addr).F).cwiseAbs().maxCoeff(), 0.0, 1e-10);
  }
}

TEST(Tensor, QuaternionicGroundState) {
  const StepTwoGroup q = preset("quaternionic-heisenberg");
  const TauFrame frame = normalize(q, (VectorXd(3) << 0.6, 0.0, -0.8).finished());
  const std::vector<Axis> axes(4, centered_axis(24, 0.45));
  const LaguerreTensor T = laguerre_coefficients(
      basis_field(frame, axes, MultiIndexPair::raw({0, 0}, {0, 0})), frame, 2);
  EXPECT_NEAR((T.F - indicator_tensor(frame, 2, MultiIndexPair::basis({1, 1}, {1, 1})).F).cwiseAbs().maxCoeff(),
              0.0, 1e-6);
}

TEST(Tensor, SynthesisRoundTripOfGaussian) {
  H1Setup s;
  const oracle::Gaussian ga{1.1, Eigen::Vector2d(0.25, -0.15), cd(0.8, 0.3)};
  const SampledField f = sample_field(s.axes, ga);
  const LaguerreTensor T = laguerre_coefficients(f, s.frame, 8);
  const SampledField back = synthesize_field(T, s.axes);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num += std::norm(back[i] - f[i]);
    den += std::norm(f[i]);
  }
  EXPECT_LT(std::sqrt(num / den), 1e-4);
  EXPECT_EQ(synthesize(zero_tensor(s.frame, 4), Eigen::Vector2d(0.3, 0.1)), cd(0.0));
  LaguerreTensor single = zero_tensor(s.frame, 4);
  single.at(MultiIndexPair::basis({2}, {3})) = cd(0.0, 2.0);
  const VectorXd y = Eigen::Vector2d(0.4, -0.7);
  EXPECT_NEAR(std::abs(synthesize(single, y) -
                       cd(0.0, 2.0) * exp_laguerre(s.frame, MultiIndexPair::basis({2}, {3}), y)),
              0.0, 1e-15);
}

TEST(Tensor, IdentityAndIndicatorAlgebra) {
  std::mt19937_64 rng(71);
  const StepTwoGroup g = oracle::random_group(2, 1, rng);
  const TauFrame frame = normalize(g, VectorXd::Constant(1, 1.0));
  const int K = 3;
  LaguerreTensor A = zero_tensor(frame, K);
  std::normal_distribution<double> N;
  for (Eigen::Index i = 0; i < A.F.size(); ++i) A.F.data()[i] = cd(N(rng), N(rng));
  const LaguerreTensor I = identity_tensor(frame, K);
  EXPECT_EQ(tensor_multiply(A, I).F, A.F);
  EXPECT_EQ(tensor_multiply(I, A).F, A.F);
  const std::size_t side = A.side();
  for (std::size_t a = 0; a < side; a += 2)
    for (std::size_t b = 0; b < side; b += 3)
      for (std::size_t c = 0; c < side; c += 4)
        for (std::size_t d = 0; d < side; d += 3) {
          const auto p = multi_index_at(a, 2, K), k = multi_index_at(b, 2, K);
          const auto q = multi_index_at(c, 2, K), m = multi_index_at(d, 2, K);
          const LaguerreTensor prod =
              tensor_multiply(indicator_tensor(frame, K, MultiIndexPair::basis(p, k)),
                              indicator_tensor(frame, K, MultiIndexPair::basis(q, m)));
          const LaguerreTensor expected = k == q ? indicator_tensor(frame, K, MultiIndexPair::basis(p, m))
                                                 : zero_tensor(frame, K);
          EXPECT_EQ(prod.F, expected.F);
        }
  EXPECT_THROW(tensor_multiply(A, identity_tensor(frame, 2)), DimensionError);
  const TauFrame other = normalize(g, VectorXd::Constant(1, 2.0));
  EXPECT_THROW(tensor_multiply(A, identity_tensor(other, K)), DimensionError);
}

TEST(Tensor, CoefficientsOfConvolutionAreMatrixProducts) {
  H1Setup s;
  const oracle::Gaussian fa{0.9, Eigen::Vector2d(0.2, 0.1), cd(1.0, -0.4)};
  const oracle::Gaussian ga{1.2, Eigen::Vector2d(-0.15, 0.3), cd(0.5, 0.9)};
  const SampledField f = sample_field(s.axes, fa), g = sample_field(s.axes, ga);
  const SampledField fg = twisted_convolve(f, g, s.g, VectorXd::Constant(1, s.tau));
  const int K = 8;
  const LaguerreTensor lhs = laguerre_coefficients(fg, s.frame, K);
  const LaguerreTensor rhs =
      tensor_multiply(laguerre_coefficients(f, s.frame, K), laguerre_coefficients(g, s.frame, K));
  // Entries whose indices stay within K/2 are free of truncation effects.
  for (int p = 1; p <= K / 2; ++p)
    for (int m = 1; m <= K / 2; ++m) {
      const auto addr = MultiIndexPair::basis({p}, {m});
      EXPECT_NEAR(std::abs(lhs.at(addr) - rhs.at(addr)), 0.0, 1e-4) << p << " " << m;
    }
}

TEST(Tensor, GridResolutionGuard) {
  H1Setup s;
  EXPECT_THROW(check_grid_resolution(std::vector<Axis>(2, centered_axis(16, 0.8)), s.frame, 8),
               GridError);
  EXPECT_NO_THROW(check_grid_resolution(s.axes, s.frame, 8));
  EXPECT_THROW(check_grid_resolution(std::vector<Axis>(3, centered_axis(16, 0.1)), s.frame, 2),
               DimensionError);
}
