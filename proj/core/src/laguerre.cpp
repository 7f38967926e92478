#include "lagcalc/laguerre.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lagcalc/error.hpp"

namespace lagcalc {

using cd = std::complex<double>;

double laguerre_poly(int k, int p, double sigma) {
  if (k < 0 || p < 0) throw DomainError("k >= 0, p >= 0", "laguerre_poly: negative index");
  if (!(sigma >= 0.0)) throw DomainError("sigma >= 0", "laguerre_poly: negative argument");
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 1.0 + p - sigma;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + p - sigma) * cur - (j + p) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_l(int k, int p, double sigma) {
  const double L = laguerre_poly(k, p, sigma);
  if (sigma == 0.0) return p == 0 ? L : 0.0;
  const double log_scale = 0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + p + 1.0)) +
                           0.5 * p * std::log(sigma) - 0.5 * sigma;
  return std::exp(log_scale) * L;
}

cd exp_laguerre_2d(int k, int p, double y1, double y2, double tau_mag) {
  if (!(tau_mag > 0.0)) throw DomainError("tau > 0", "exp_laguerre_2d: tau must be positive");
  const int ap = std::abs(p);
  const double rho2 = y1 * y1 + y2 * y2;
  double value = 2.0 * tau_mag / std::numbers::pi * laguerre_l(k, ap, 2.0 * tau_mag * rho2);
  if (p < 0 && ap % 2 == 1) value = -value;
  if (p == 0 || value == 0.0) return value;
  const double theta = std::atan2(y2, y1);
  return value * cd(std::cos(p * theta), std::sin(p * theta));
}

MultiIndexPair MultiIndexPair::basis(std::vector<int> p, std::vector<int> k) {
  MultiIndexPair m{Mode::Basis, std::move(p), std::move(k)};
  m.validate();
  return m;
}

MultiIndexPair MultiIndexPair::raw(std::vector<int> k, std::vector<int> p) {
  MultiIndexPair m{Mode::Raw, std::move(p), std::move(k)};
  m.validate();
  return m;
}

void MultiIndexPair::validate() const {
  if (p.size() != k.size() || k.empty())
    throw DimensionError("p and k have equal nonzero length", "multi-index lengths differ");
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (mode == Mode::Basis && (p[j] < 1 || k[j] < 1))
      throw DomainError("basis address entries >= 1",
                        "basis address has an entry < 1 in slot " + std::to_string(j + 1));
    if (mode == Mode::Raw && k[j] < 0)
      throw DomainError("raw k entries >= 0",
                        "raw address has k < 0 in slot " + std::to_string(j + 1));
  }
}

MultiIndexPair MultiIndexPair::to_raw() const {
  validate();
  if (mode == Mode::Raw) return *this;
  MultiIndexPair out{Mode::Raw, std::vector<int>(k.size()), std::vector<int>(k.size())};
  for (std::size_t j = 0; j < k.size(); ++j) {
    out.k[j] = std::min(p[j], k[j]) - 1;
    out.p[j] = p[j] - k[j];
  }
  return out;
}

cd exp_laguerre_z(const Eigen::VectorXd& mu, const MultiIndexPair& raw_idx,
                  const Eigen::VectorXcd& z) {
  cd value = 1.0;
  for (int j = 0; j < mu.size(); ++j) {
    value *= exp_laguerre_2d(raw_idx.k[j], raw_idx.p[j], z(j).real(), z(j).imag(), mu(j));
    if (value == 0.0) break;
  }
  return value;
}

cd exp_laguerre(const TauFrame& frame, const MultiIndexPair& idx, const Eigen::VectorXd& y) {
  const MultiIndexPair raw = idx.to_raw();
  if (raw.n() != frame.n())
    throw DimensionError("index length n", "multi-index length does not match the frame");
  if (!(frame.mu.minCoeff() > 0.0))
    throw DegenerateTau({}, "exp_laguerre: frame has a vanishing mu");
  return exp_laguerre_z(frame.mu, raw, complex_tau_coordinates(frame, y));
}

ShiftResult shift_apply_mu(double mu, ShiftOp which, int j, const MultiIndexPair& idx) {
  MultiIndexPair out = idx.to_raw();
  if (j < 0 || j >= out.n())
    throw DimensionError("slot index in range", "shift_apply: slot " + std::to_string(j) +
                                                    " outside [0, n)");
  int& k = out.k[j];
  int& q = out.p[j];
  double c = 0.0;
  if (which == ShiftOp::Zbar) {
    if (q <= -1) {
      c = -std::sqrt(2.0 * mu * (k - q));
      q += 1;
    } else {
      if (k == 0) return Annihilated{};
      c = -std::sqrt(2.0 * mu * k);
      k -= 1;
      q += 1;
    }
  } else {
    if (q >= 1) {
      c = std::sqrt(2.0 * mu * (k + 1));
      k += 1;
      q -= 1;
    } else {
      c = std::sqrt(2.0 * mu * (k - q + 1));
      q -= 1;
    }
  }
  return Shifted{c, std::move(out)};
}

ShiftResult shift_apply(const TauFrame& frame, ShiftOp which, int j, const MultiIndexPair& idx) {
  if (idx.n() != frame.n())
    throw DimensionError("index length n", "multi-index length does not match the frame");
  if (j < 0 || j >= frame.n())
    throw DimensionError("slot index in range", "shift_apply: slot outside [0, n)");
  return shift_apply_mu(frame.mu(j), which, j, idx);
}

}  // namespace lagcalc
