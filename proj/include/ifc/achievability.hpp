#pragma once

#include <optional>
#include <vector>

#include "ifc/model.hpp"

namespace ifc {

/// Sum over k of log2(1 + h_kk^2 / (1 + sum_{i != k} |h_ki|^2)): every receiver
/// decodes its own message treating all other signals as noise. On
/// upper-triangular channels this equals the sum of succ_dec_rates.
double tin_sum_rate(const ChannelMatrix& h);

/// r_k = log2(1 + h_kk^2 / (1 + sum_{i > k} |h_ki|^2)): receiver k has removed
/// users 1..k-1 and treats users k+1..K as noise.
std::vector<double> succ_dec_rates(const ChannelMatrix& h);

struct MacViolation {
  int receiver = 0;
  std::vector<int> subset;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct MacCheckResult {
  bool feasible = true;
  std::vector<MacViolation> violations;
};

inline constexpr int kMaxMacUsers = 20;

/// Checks R_k + sum_{j in S} R_j <= log2(1 + (h_kk^2 + sum_{j in S} |h_kj|^2) /
/// (1 + sum_{i > k} |h_ki|^2)) for every receiver k and every S in [1:k-1],
/// at rates = succ_dec_rates(h). Throws TooLarge above kMaxMacUsers.
MacCheckResult mac_feasibility(const ChannelMatrix& h);
MacCheckResult mac_feasibility(const ChannelMatrix& h, const std::vector<double>& rates);

/// Degraded broadcast bound: per-user
/// log2(1 + beta_k |b|^2 |a_k|^2 / (1 + (sum_{j>k} beta_j |b|^2) |a_k|^2)).
std::vector<double> bc_bound(const std::vector<Complex>& a, const std::vector<Complex>& b,
                             const std::vector<double>& beta);

/// Sum of bc_bound at beta_k = |b_k|^2 / |b|^2.
double degraded_sum_capacity(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// sum_k log2(1 + |a_k|^2 |h_kk/a_k|^2 / (1 + |a_k|^2 sum_{j>k} |h_jj/a_j|^2)),
/// the sum-capacity of rank-one channels written through a and the direct gains.
double rank_one_sum_rate(const std::vector<Complex>& a, const std::vector<double>& direct_gains);

/// H = a b^H with users relabeled so that |a| is nondecreasing.
struct RankOneFactor {
  std::vector<int> order;  // order[i] = original user placed at position i
  std::vector<Complex> a;
  std::vector<Complex> b;
  double singular_ratio = 0.0;  // sigma_2 / sigma_1
};

/// Numerical rank-one test (sigma_2 <= rel_tol * sigma_1) and factorization.
std::optional<RankOneFactor> rank_one_factor(const ChannelMatrix& h, double rel_tol = 1e-9);

/// Channel with users relabeled: out(i, j) = h(order[i], order[j]).
ChannelMatrix relabel(const ChannelMatrix& h, const std::vector<int>& order);

/// TIN always; SUCC_DEC when the successive-decoding rates are known to be
/// achievable (upper-triangular channel, passing MAC check, or rank one after
/// sorting).
LowerBounds achievable_lower_bounds(const ChannelMatrix& h);

}  // namespace ifc
