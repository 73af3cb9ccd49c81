#include "ifc/achievability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace ifc {

namespace {

void check_sorted(const std::vector<Complex>& a) {
  for (std::size_t k = 0; k + 1 < a.size(); ++k)
    if (std::abs(a[k]) > std::abs(a[k + 1]))
      throw Error(ErrorCode::NotSorted, "entries of a must satisfy |a_1| <= ... <= |a_K|");
}

}  // namespace

double tin_sum_rate(const ChannelMatrix& h) {
  const int n = h.users();
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    double interference = 0.0;
    for (int i = 0; i < n; ++i)
      if (i != k) interference += std::norm(h(k, i));
    const double g = h.direct_gain(k);
    total += std::log2(1.0 + g * g / (1.0 + interference));
  }
  return total;
}

std::vector<double> succ_dec_rates(const ChannelMatrix& h) {
  const int n = h.users();
  std::vector<double> r(n);
  for (int k = 0; k < n; ++k) {
    double interference = 0.0;
    for (int i = k + 1; i < n; ++i) interference += std::norm(h(k, i));
    const double g = h.direct_gain(k);
    r[k] = std::log2(1.0 + g * g / (1.0 + interference));
  }
  return r;
}

MacCheckResult mac_feasibility(const ChannelMatrix& h) { return mac_feasibility(h, succ_dec_rates(h)); }

MacCheckResult mac_feasibility(const ChannelMatrix& h, const std::vector<double>& rates) {
  const int n = h.users();
  if (n > kMaxMacUsers) throw Error(ErrorCode::TooLarge, "MAC check enumerates 2^(k-1) subsets; K <= 20");
  if (static_cast<int>(rates.size()) != n) throw Error(ErrorCode::DimensionMismatch, "one rate per user");
  MacCheckResult out;
  for (int k = 0; k < n; ++k) {
    double noise = 1.0;
    for (int i = k + 1; i < n; ++i) noise += std::norm(h(k, i));
    const double g = h.direct_gain(k);
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      double lhs = rates[k];
      double power = g * g;
      for (int j = 0; j < k; ++j)
        if (mask & (1u << j)) {
          lhs += rates[j];
          power += std::norm(h(k, j));
        }
      const double rhs = std::log2(1.0 + power / noise);
      if (lhs > rhs + 1e-12) {
        MacViolation v{k, {}, lhs, rhs};
        for (int j = 0; j < k; ++j)
          if (mask & (1u << j)) v.subset.push_back(j);
        out.violations.push_back(std::move(v));
      }
    }
  }
  out.feasible = out.violations.empty();
  return out;
}

std::vector<double> bc_bound(const std::vector<Complex>& a, const std::vector<Complex>& b,
                             const std::vector<double>& beta) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() != n || beta.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "a, b and beta must be nonempty and of equal length");
  check_sorted(a);
  double sum = 0.0;
  for (double x : beta) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::BetaInvalid, "beta entries must be >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::BetaInvalid, "beta entries must sum to 1");
  double b_energy = 0.0;
  for (const Complex& x : b) b_energy += std::norm(x);

  std::vector<double> out(n);
  double tail = 0.0;  // sum_{j > k} beta_j
  for (std::size_t k = n; k-- > 0;) {
    const double gain = std::norm(a[k]);
    out[k] = std::log2(1.0 + beta[k] * b_energy * gain / (1.0 + tail * b_energy * gain));
    tail += beta[k];
  }
  return out;
}

double degraded_sum_capacity(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double b_energy = 0.0;
  for (const Complex& x : b) b_energy += std::norm(x);
  if (!(b_energy > 0.0)) throw Error(ErrorCode::NonStandardDiagonal, "b must be nonzero");
  std::vector<double> beta(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) beta[k] = std::norm(b[k]) / b_energy;
  // Renormalize so the sum is 1 to machine precision.
  const double s = std::accumulate(beta.begin(), beta.end(), 0.0);
  for (double& x : beta) x /= s;
  const auto rates = bc_bound(a, b, beta);
  return std::accumulate(rates.begin(), rates.end(), 0.0);
}

double rank_one_sum_rate(const std::vector<Complex>& a, const std::vector<double>& direct_gains) {
  const std::size_t n = a.size();
  if (n == 0 || direct_gains.size() != n) throw Error(ErrorCode::DimensionMismatch, "a and gains must match");
  check_sorted(a);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ak2 = std::norm(a[k]);
    double tail = 0.0;
    for (std::size_t j = k + 1; j < n; ++j) tail += std::norm(direct_gains[j] / a[j]);
    total += std::log2(1.0 + ak2 * std::norm(direct_gains[k] / a[k]) / (1.0 + ak2 * tail));
  }
  return total;
}

std::optional<RankOneFactor> rank_one_factor(const ChannelMatrix& h, double rel_tol) {
  const int n = h.users();
  Eigen::JacobiSVD<CMatrix> svd(h.gains(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double ratio = n > 1 ? s(1) / s(0) : 0.0;
  if (ratio > rel_tol) return std::nullopt;

  std::vector<Complex> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = s(0) * svd.matrixU()(i, 0);
    b[i] = svd.matrixV()(i, 0);
  }
  RankOneFactor f;
  f.singular_ratio = ratio;
  f.order.resize(n);
  std::iota(f.order.begin(), f.order.end(), 0);
  std::stable_sort(f.order.begin(), f.order.end(),
                   [&](int x, int y) { return std::abs(a[x]) < std::abs(a[y]); });
  for (int i = 0; i < n; ++i) {
    f.a.push_back(a[f.order[i]]);
    f.b.push_back(b[f.order[i]]);
  }
  return f;
}

ChannelMatrix relabel(const ChannelMatrix& h, const std::vector<int>& order) {
  const int n = h.users();
  if (static_cast<int>(order.size()) != n) throw Error(ErrorCode::DimensionMismatch, "order must cover every user");
  CMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = h(order[i], order[j]);
  return ChannelMatrix::validate(out);
}

LowerBounds achievable_lower_bounds(const ChannelMatrix& h) {
  LowerBounds lb;
  lb.tin = tin_sum_rate(h);
  auto sum = [](const std::vector<double>& r) { return std::accumulate(r.begin(), r.end(), 0.0); };
  std::optional<double> best;
  auto offer = [&](double v) {
    if (!best || v > *best) best = v;
  };
  if (h.is_upper_triangular()) offer(sum(succ_dec_rates(h)));
  else if (h.users() <= kMaxMacUsers && mac_feasibility(h).feasible) offer(sum(succ_dec_rates(h)));
  if (h.users() > 1) {
    if (auto f = rank_one_factor(h)) {
      const ChannelMatrix sorted = relabel(h, f->order);
      offer(sum(succ_dec_rates(sorted)));
    }
  }
  lb.succ_dec = best;
  return lb;
}

}  // namespace ifc
