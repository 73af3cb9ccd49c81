#include "ifc/construct.hpp"

#include <cmath>
#include <sstream>

#include "ifc/certify.hpp"

namespace ifc {

namespace {

void check_gains(const std::vector<double>& g, int users) {
  if (static_cast<int>(g.size()) != users)
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(users) + " direct gains, got " +
                                                  std::to_string(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k)
    if (!std::isfinite(g[k]) || !(g[k] > 0.0))
      throw Error(ErrorCode::NonPositiveDiagonal,
                  "direct gain " + std::to_string(k + 1) + " must be finite and strictly positive");
}

}  // namespace

ChannelMatrix build_z_channel(const NoiseCorrelation& sigma, const std::vector<double>& diag_gains) {
  const int n = sigma.users();
  check_gains(diag_gains, n);
  const CMatrix& s = sigma.matrix();
  CMatrix h = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) h(k, k) = diag_gains[k];
  for (int k = n - 1; k >= 1; --k) {
    const int t = n - k - 1;
    const auto tail = h.row(k).segment(k + 1, t);
    const double denom = 1.0 + tail.squaredNorm();
    CVector col = s.col(k).head(k);
    if (t > 0) col += h.block(0, k + 1, k, t) * tail.adjoint();
    h.col(k).head(k) = (diag_gains[k] / denom) * col;
  }
  ChannelMatrix out = ChannelMatrix::validate(h);
  const DegradednessWitness w = degradedness_witness(out, sigma);
  if (!w.passed) {
    std::ostringstream os;
    os << "constructed channel is not degraded in the required sense (max coefficient residual "
       << w.max_coefficient_residual() << ")";
    throw Error(ErrorCode::WitnessFailure, os.str());
  }
  return out;
}

CMatrix invert_z_recursion(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  if (n == 0 || h.cols() != n) throw Error(ErrorCode::NonSquare, "channel must be square");
  CMatrix s = CMatrix::Identity(n, n);
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    const Complex d = h(k, k);
    if (std::abs(d) == 0.0) throw Error(ErrorCode::NonPositiveDiagonal, "zero direct gain");
    const Eigen::Index t = n - k - 1;
    const auto tail = h.row(k).segment(k + 1, t);
    const double denom = 1.0 + tail.squaredNorm();
    CVector rho = h.col(k).head(k) * (denom / d);
    if (t > 0) rho -= h.block(0, k + 1, k, t) * tail.adjoint();
    s.col(k).head(k) = rho;
    s.row(k).head(k) = rho.adjoint();
  }
  return s;
}

ChannelMatrix many_to_one(const std::vector<Complex>& v, const std::vector<double>& diag_gains, bool strict) {
  const int n = static_cast<int>(diag_gains.size());
  if (n < 1) throw Error(ErrorCode::NonSquare, "many-to-one channel needs at least one user");
  check_gains(diag_gains, n);
  if (static_cast<int>(v.size()) != n - 1)
    throw Error(ErrorCode::DimensionMismatch, "expected K-1 = " + std::to_string(n - 1) + " coefficients v_2..v_K");
  double energy = 0.0;
  for (const Complex& x : v) energy += std::norm(x);
  if (strict && energy > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "sum of |v_k|^2 is " << energy << " > 1";
    throw Error(ErrorCode::ConditionViolated, os.str());
  }
  CMatrix h = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) h(k, k) = diag_gains[k];
  for (int k = 1; k < n; ++k) h(0, k) = v[k - 1] * diag_gains[k];
  return ChannelMatrix::validate(h);
}

ChannelMatrix rank_one_channel(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  const int n = static_cast<int>(a.size());
  if (n < 1 || b.size() != a.size())
    throw Error(ErrorCode::DimensionMismatch, "a and b must be nonempty and of equal length");
  for (int k = 0; k + 1 < n; ++k)
    if (std::abs(a[k]) > std::abs(a[k + 1]))
      throw Error(ErrorCode::NotSorted, "entries of a must satisfy |a_1| <= ... <= |a_K|");
  CMatrix h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = a[i] * std::conj(b[j]);
  for (int k = 0; k < n; ++k) {
    const Complex d = h(k, k);
    if (!(d.real() > 0.0) || std::abs(d.imag()) > 1e-12 * std::abs(d)) {
      std::ostringstream os;
      os << "a_" << k + 1 << " conj(b_" << k + 1 << ") = (" << d.real() << "," << d.imag()
         << ") is not real and strictly positive";
      throw Error(ErrorCode::NonStandardDiagonal, os.str());
    }
    h(k, k) = d.real();
  }
  return ChannelMatrix::validate(h);
}

}  // namespace ifc
