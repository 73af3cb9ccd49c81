#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifc/model.hpp"

namespace ifc {

/// A (subset, ordering) pair indexing one bound instance. `subset` is sorted
/// ascending; `perm` is an arrangement of the same users. 0-based.
struct BoundTerm {
  std::vector<int> subset;
  std::vector<int> perm;

  friend bool operator==(const BoundTerm&, const BoundTerm&) = default;
};

inline constexpr int kMaxFullEnumerationUsers = 8;
inline constexpr int kMaxSumRateOnlyUsers = 10;

/// Throws InvalidArgument unless `t` is a well-formed term for `users`.
void check_term(int users, const BoundTerm& t);

/// Sum over k of C(K, k) k!, the number of (subset, permutation) pairs.
std::uint64_t count_terms(int users);

/// All (S, pi) pairs: subsets by size then lexicographically, permutations
/// lexicographically. Throws TooLarge above kMaxFullEnumerationUsers.
std::vector<BoundTerm> enumerate_terms(int users);

/// The K! terms with S = [1:K]. Throws TooLarge above kMaxSumRateOnlyUsers.
std::vector<BoundTerm> sum_rate_terms(int users);

/// sum_k I(Y_{pi_k}; X_{pi_k..pi_|S|} | X_{pi_1..pi_{k-1}}, Y_{pi_1..pi_{k-1}}, X(S^c))
/// for iid unit-power Gaussian inputs and receiver noise correlation `sigma`.
double kra_term_value(const ChannelMatrix& h, const NoiseCorrelation& sigma, const BoundTerm& t);

struct KraMinimum {
  double value = 0.0;
  NoiseCorrelation sigma;
  std::vector<std::string> warnings;
  int evals = 0;
};

/// Approximate minimum of kra_term_value over all noise correlations; only the
/// block of sigma on the term's subset matters, the rest of the witness is
/// the identity.
KraMinimum kra_term_min(const ChannelMatrix& h, const BoundTerm& t, const OptimizerConfig& cfg);

/// One summand of the genie-aided family: h(Y_k | G_m) - h(G_m | Y_k, X_1..X_K)
/// with G_m's noise correlated by `rho` with Z_k.
double etw_summand(const ChannelMatrix& h, int k, int m, Complex rho);

/// Sum over the elements k of S (ascending) of etw_summand(k, pi_k, rhos_k).
double etw_term_value(const ChannelMatrix& h, const BoundTerm& t, const std::vector<Complex>& rhos);

struct EtwSummandMinimum {
  double value = 0.0;
  Complex rho{0.0, 0.0};
};

/// Minimizes etw_summand over |rho| <= 1 - 1e-6.
EtwSummandMinimum etw_summand_min(const ChannelMatrix& h, int k, int m, const OptimizerConfig& cfg);

struct EtwMinimum {
  double value = 0.0;
  std::vector<Complex> rhos;
};

EtwMinimum etw_term_min(const ChannelMatrix& h, const BoundTerm& t, const OptimizerConfig& cfg);

/// Every requested family minimized over all (S, pi), reduced to one
/// inequality per (subset, family), plus the sum-rate extraction and the
/// achievable lower bounds.
BoundReport region(const ChannelMatrix& h, const OptimizerConfig& cfg,
                   const std::vector<Family>& families = {Family::KRA, Family::ETW},
                   bool sum_rate_only = false);

}  // namespace ifc
