#pragma once

#include <cmath>
#include <vector>

#include "ifc/model.hpp"
#include "ifc/rng.hpp"

namespace fixtures {

using ifc::CMatrix;
using ifc::Complex;

inline Complex complex_normal(ifc::CounterRng& rng) {
  const double re = rng.normal();
  return {re * M_SQRT1_2, rng.normal() * M_SQRT1_2};
}

inline std::vector<Complex> complex_vector(ifc::CounterRng& rng, int n) {
  std::vector<Complex> v(n);
  for (auto& z : v) z = complex_normal(rng);
  return v;
}

/// Complex Gaussian cross gains, direct gains uniform in [0.3, 2].
inline ifc::ChannelMatrix random_channel(ifc::CounterRng& rng, int k, bool real = false) {
  CMatrix h(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) h(i, j) = rng.uniform(0.3, 2.0);
      else if (real) h(i, j) = rng.normal();
      else h(i, j) = complex_normal(rng);
    }
  return ifc::ChannelMatrix::validate(h);
}

/// Normalized Wishart draw: a correlation matrix with min eigenvalue > 0.
inline ifc::NoiseCorrelation random_sigma(ifc::CounterRng& rng, int k) {
  CMatrix g(k, k + 1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= k; ++j) g(i, j) = complex_normal(rng);
  CMatrix a = g * g.adjoint();
  Eigen::VectorXd d = a.diagonal().real().cwiseSqrt().cwiseInverse();
  CMatrix s = d.asDiagonal() * a * d.asDiagonal();
  for (int i = 0; i < k; ++i) s(i, i) = 1.0;
  return ifc::NoiseCorrelation::validate(0.5 * (s + s.adjoint()));
}

inline std::vector<double> log_uniform(ifc::CounterRng& rng, int n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = std::exp(rng.uniform(std::log(lo), std::log(hi)));
  return v;
}

inline ifc::ChannelMatrix channel(std::initializer_list<std::initializer_list<Complex>> rows) {
  const int n = static_cast<int>(rows.size());
  CMatrix h(n, n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const Complex& z : row) h(i, j++) = z;
    ++i;
  }
  return ifc::ChannelMatrix::validate(h);
}

}  // namespace fixtures
