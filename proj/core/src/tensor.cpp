#include "lagcalc/tensor.hpp"

#include <cmath>
#include <numbers>

#include "lagcalc/error.hpp"
#include "lagcalc/parallel.hpp"

namespace lagcalc {

using cd = std::complex<double>;
using Eigen::MatrixXcd;

std::size_t multi_index_position(const std::vector<int>& a, int K) {
  std::size_t pos = 0;
  for (int v : a) {
    if (v < 1 || v > K)
      throw DomainError("address entries in 1..K", "tensor address entry outside 1..K");
    pos = pos * K + static_cast<std::size_t>(v - 1);
  }
  return pos;
}

std::vector<int> multi_index_at(std::size_t pos, int n, int K) {
  std::vector<int> a(n);
  for (int j = n - 1; j >= 0; --j) {
    a[j] = static_cast<int>(pos % K) + 1;
    pos /= K;
  }
  return a;
}

cd& LaguerreTensor::at(const MultiIndexPair& b) {
  if (b.mode != MultiIndexPair::Mode::Basis)
    throw DomainError("basis address", "tensor entries are addressed in basis mode");
  return F(multi_index_position(b.p, K), multi_index_position(b.k, K));
}

cd LaguerreTensor::at(const MultiIndexPair& b) const {
  return const_cast<LaguerreTensor*>(this)->at(b);
}

namespace {

std::size_t power(int K, int n) {
  std::size_t s = 1;
  for (int j = 0; j < n; ++j) s *= static_cast<std::size_t>(K);
  return s;
}

void require_frame(const TauFrame& frame, int K) {
  if (K < 1) throw DomainError("K >= 1", "tensor truncation K must be positive");
  if (!(frame.mu.size() > 0 && frame.mu.minCoeff() > 0.0))
    throw DegenerateTau({}, "tensor operations need a non-degenerate frame");
}

// Values of the 2-d functions of slot j for all basis pairs (a, b) in {1..K}^2,
// laid out as table[(a-1) * K + (b-1)].
void slot_table(double mu, cd z, int K, std::vector<cd>& table) {
  table.resize(static_cast<std::size_t>(K) * K);
  for (int a = 1; a <= K; ++a)
    for (int b = 1; b <= K; ++b)
      table[(a - 1) * K + (b - 1)] =
          exp_laguerre_2d(std::min(a, b) - 1, a - b, z.real(), z.imag(), mu);
}

}  // namespace

LaguerreTensor zero_tensor(const TauFrame& frame, int K) {
  require_frame(frame, K);
  const std::size_t s = power(K, frame.n());
  return {frame, K, MatrixXcd::Zero(s, s)};
}

LaguerreTensor identity_tensor(const TauFrame& frame, int K) {
  LaguerreTensor T = zero_tensor(frame, K);
  T.F.setIdentity();
  return T;
}

LaguerreTensor indicator_tensor(const TauFrame& frame, int K, const MultiIndexPair& b) {
  LaguerreTensor T = zero_tensor(frame, K);
  T.at(b) = 1.0;
  return T;
}

double basis_norm_squared(const TauFrame& frame) {
  double v = 1.0;
  for (int j = 0; j < frame.n(); ++j) v *= 2.0 * frame.mu(j) / std::numbers::pi;
  return v;
}

void check_grid_resolution(const std::vector<Axis>& axes, const TauFrame& frame, int K) {
  if (axes.size() != static_cast<std::size_t>(2 * frame.n()))
    throw DimensionError("grid over R^{2n}", "field dimension does not match the frame");
  const int nmax = 2 * K - 2;
  const double kappa = std::sqrt(2.0 * frame.mu(0) * (2.0 * nmax + 1.0));
  const double hmax = 2.0 * std::numbers::pi / kappa / 4.0;
  for (const Axis& a : axes)
    if (a.step() > hmax)
      throw GridError("grid resolves basis up to K",
                      "grid step " + std::to_string(a.step()) + " exceeds " +
                          std::to_string(hmax) + " needed for K = " + std::to_string(K));
}

LaguerreTensor laguerre_coefficients(const SampledField& f, const TauFrame& frame, int K) {
  require_frame(frame, K);
  check_grid_resolution(f.axes(), frame, K);
  const int n = frame.n();
  const std::size_t side = power(K, n);
  const std::size_t npts = f.size();
  constexpr std::size_t chunk = 1024;
  const std::size_t nchunks = (npts + chunk - 1) / chunk;
  std::vector<MatrixXcd> partial(nchunks);
  std::vector<std::vector<int>> addr(side);
  for (std::size_t a = 0; a < side; ++a) addr[a] = multi_index_at(a, n, K);
  // Chunk boundaries depend only on the grid, so the reduction order below is
  // fixed regardless of how many threads ran the chunks.
  parallel_for(nchunks, [&](std::size_t c) {
    MatrixXcd acc = MatrixXcd::Zero(side, side);
    std::vector<std::vector<cd>> tables(n);
    for (std::size_t i = c * chunk; i < std::min(npts, (c + 1) * chunk); ++i) {
      const cd fv = f[i];
      if (fv == 0.0) continue;
      const Eigen::VectorXcd z = complex_tau_coordinates(frame, f.point(i));
      for (int j = 0; j < n; ++j) slot_table(frame.mu(j), z(j), K, tables[j]);
      for (std::size_t row = 0; row < side; ++row) {
        const std::vector<int>& p = addr[row];
        for (std::size_t col = 0; col < side; ++col) {
          const std::vector<int>& k = addr[col];
          cd v = 1.0;
          for (int j = 0; j < n; ++j) v *= tables[j][(p[j] - 1) * K + (k[j] - 1)];
          acc(row, col) += fv * std::conj(v);
        }
      }
    }
    partial[c] = std::move(acc);
  });
  // Pairwise combination of chunk sums.
  for (std::size_t width = 1; width < nchunks; width *= 2)
    for (std::size_t c = 0; c + width < nchunks; c += 2 * width) partial[c] += partial[c + width];
  LaguerreTensor T{frame, K, MatrixXcd::Zero(side, side)};
  if (nchunks > 0) T.F = partial[0] * (f.cell_volume() / basis_norm_squared(frame));
  return T;
}

cd synthesize(const LaguerreTensor& T, const Eigen::VectorXd& y) {
  const int n = T.n(), K = T.K;
  const Eigen::VectorXcd z = complex_tau_coordinates(T.frame, y);
  std::vector<std::vector<cd>> tables(n);
  for (int j = 0; j < n; ++j) slot_table(T.frame.mu(j), z(j), K, tables[j]);
  cd sum = 0.0;
  for (Eigen::Index row = 0; row < T.F.rows(); ++row) {
    const std::vector<int> p = multi_index_at(row, n, K);
    for (Eigen::Index col = 0; col < T.F.cols(); ++col) {
      if (T.F(row, col) == 0.0) continue;
      const std::vector<int> k = multi_index_at(col, n, K);
      cd v = 1.0;
      for (int j = 0; j < n; ++j) v *= tables[j][(p[j] - 1) * K + (k[j] - 1)];
      sum += T.F(row, col) * v;
    }
  }
  return sum;
}

SampledField synthesize_field(const LaguerreTensor& T, const std::vector<Axis>& axes) {
  if (axes.size() != static_cast<std::size_t>(2 * T.n()))
    throw DimensionError("grid over R^{2n}", "synthesize_field: grid dimension mismatch");
  return sample_field(axes, [&](const Eigen::VectorXd& y) { return synthesize(T, y); });
}

bool same_frame(const TauFrame& a, const TauFrame& b, double tol) {
  if (a.mu.size() != b.mu.size() || a.tau.size() != b.tau.size()) return false;
  return (a.tau - b.tau).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.tau.norm()) &&
         (a.mu - b.mu).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.mu.maxCoeff()) &&
         (a.O - b.O).cwiseAbs().maxCoeff() <= tol;
}

LaguerreTensor tensor_multiply(const LaguerreTensor& A, const LaguerreTensor& B) {
  if (A.K != B.K) throw DimensionError("equal truncation K", "tensor_multiply: K mismatch");
  if (!same_frame(A.frame, B.frame))
    throw DimensionError("same frame", "tensor_multiply: tensors use different frames");
  return {A.frame, A.K, A.F * B.F};
}

}  // namespace lagcalc
