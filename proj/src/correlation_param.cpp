#include "ifc/correlation_param.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

namespace ifc {

namespace {

// x_1 = cos t_1, x_2 = sin t_1 cos t_2, ..., x_n = sin t_1 ... sin t_{n-1}.
void sphere_point(std::span<const double> t, std::span<double> x) {
  const std::size_t n = x.size();
  double s = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    x[i] = s * std::cos(t[i]);
    s *= std::sin(t[i]);
  }
  x[n - 1] = s;
}

void sphere_angles(std::span<const double> x, std::span<double> t) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double tail = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) tail += x[j] * x[j];
    if (i + 2 == n)
      t[i] = std::atan2(x[n - 1], x[n - 2]);
    else
      t[i] = std::atan2(std::sqrt(tail), x[i]);
  }
}

}  // namespace

int correlation_angle_count(int n) { return n * (n - 1); }

CMatrix correlation_from_angles(int n, std::span<const double> angles) {
  if (static_cast<int>(angles.size()) != correlation_angle_count(n))
    throw Error(ErrorCode::DimensionMismatch, "wrong number of correlation angles");
  CMatrix l = CMatrix::Zero(n, n);
  l(0, 0) = 1.0;
  std::vector<double> x;
  std::size_t offset = 0;
  for (int i = 1; i < n; ++i) {
    const std::size_t m = 2 * static_cast<std::size_t>(i);
    x.assign(m + 1, 0.0);
    sphere_point(angles.subspan(offset, m), x);
    offset += m;
    for (int c = 0; c < i; ++c) l(i, c) = Complex(x[2 * c], x[2 * c + 1]);
    l(i, i) = x[m];
  }
  CMatrix s = l * l.adjoint();
  for (int i = 0; i < n; ++i) s(i, i) = 1.0;
  return s;
}

std::optional<std::vector<double>> angles_from_correlation(const CMatrix& sigma) {
  const int n = static_cast<int>(sigma.rows());
  for (int i = 0; i < n; ++i)
    if (std::abs(sigma(i, i) - 1.0) > 1e-12) return std::nullopt;
  Eigen::LLT<CMatrix> llt(sigma);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const CMatrix l = llt.matrixL();
  for (int i = 0; i < n; ++i)
    if (std::norm(l(i, i)) <= 1e-12) return std::nullopt;
  std::vector<double> angles(correlation_angle_count(n));
  std::vector<double> x;
  std::size_t offset = 0;
  for (int i = 1; i < n; ++i) {
    const std::size_t m = 2 * static_cast<std::size_t>(i);
    x.assign(m + 1, 0.0);
    double norm = 0.0;
    for (int c = 0; c < i; ++c) {
      x[2 * c] = l(i, c).real();
      x[2 * c + 1] = l(i, c).imag();
    }
    x[m] = l(i, i).real();
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : x) v /= norm;
    sphere_angles(x, std::span<double>(angles).subspan(offset, m));
    offset += m;
  }
  return angles;
}

std::vector<double> identity_angles(int n) {
  return std::vector<double>(correlation_angle_count(n), std::numbers::pi / 2.0);
}

}  // namespace ifc
