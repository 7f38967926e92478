#include <random>

#include <benchmark/benchmark.h>

#include "lagcalc/field.hpp"
#include "lagcalc/kernels.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/spectral.hpp"
#include "lagcalc/tensor.hpp"
#include "lagcalc/twisted.hpp"

using namespace lagcalc;
using Eigen::VectorXd;

namespace {

StepTwoGroup random_group(int n, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<Eigen::MatrixXd> B;
  for (int b = 0; b < r; ++b) {
    Eigen::MatrixXd A(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = N(rng);
    B.push_back(A - A.transpose());
  }
  return make_group(n, r, B);
}

void BM_Normalize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StepTwoGroup g = random_group(n, 3, 7);
  const VectorXd tau = Eigen::Vector3d(0.3, -0.8, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(normalize(g, tau));
}
BENCHMARK(BM_Normalize)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_LaguerreL(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  double sigma = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(laguerre_l(k, 3, sigma));
    sigma += 1e-9;
  }
}
BENCHMARK(BM_LaguerreL)->Arg(4)->Arg(32)->Arg(256);

void BM_TwistedConvolve(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const std::vector<Axis> axes(2, centered_axis(count, 8.0 / static_cast<double>(count)));
  const SampledField f = sample_field(axes, [](const VectorXd& y) { return std::complex<double>(std::exp(-y.squaredNorm())); });
  const StepTwoGroup h1 = preset("heisenberg-1");
  for (auto _ : state) benchmark::DoNotOptimize(twisted_convolve(f, f, h1, VectorXd::Constant(1, 1.0)));
}
BENCHMARK(BM_TwistedConvolve)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_TensorCoefficients(benchmark::State& state) {
  const std::vector<Axis> axes(2, centered_axis(64, 0.2));
  const StepTwoGroup h1 = preset("heisenberg-1");
  const TauFrame frame = normalize(h1, VectorXd::Constant(1, 1.0));
  const SampledField f = sample_field(axes, [](const VectorXd& y) { return std::complex<double>(std::exp(-y.squaredNorm())); });
  for (auto _ : state) benchmark::DoNotOptimize(laguerre_coefficients(f, frame, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TensorCoefficients)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_FundamentalSolution(benchmark::State& state) {
  const StepTwoGroup g = state.range(0) == 0 ? preset("heisenberg-1") : preset("quaternionic-heisenberg");
  const FundamentalSolver solver(g);
  const VectorXd y = VectorXd::Constant(g.m(), 0.5), t = VectorXd::Constant(g.r(), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(solver.evaluate(y, t));
}
BENCHMARK(BM_FundamentalSolution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
