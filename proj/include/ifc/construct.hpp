#pragma once

#include <vector>

#include "ifc/model.hpp"

// Channel families whose sum-capacity is known in closed form.
namespace ifc {

/// Upper-triangular channel from a noise correlation seed. For k = K..2,
/// column k above the diagonal is
///   h_kk / (1 + |H[k, k+1:K]|^2) * (rho_{k-1} + H[1:k-1, k+1:K] H[k, k+1:K]^H),
/// where rho_{k-1} is column k of sigma above the diagonal. Every output is
/// checked with degradedness_witness; throws WitnessFailure when it fails.
ChannelMatrix build_z_channel(const NoiseCorrelation& sigma, const std::vector<double>& diag_gains);

/// Inverse of the build_z_channel recursion: the Hermitian unit-diagonal
/// matrix whose recursion reproduces the strictly upper part of `h` (entries
/// below the diagonal are ignored). The result need not be PSD.
CMatrix invert_z_recursion(const CMatrix& h);

/// Many-to-one channel: first row (h_11, v_2 h_22, ..., v_K h_KK), diagonal
/// `diag_gains`, zeros elsewhere. `v` holds v_2..v_K. In strict mode throws
/// ConditionViolated when sum |v_k|^2 > 1.
ChannelMatrix many_to_one(const std::vector<Complex>& v, const std::vector<double>& diag_gains,
                          bool strict = true);

/// H = a b^H. Throws NotSorted unless |a_1| <= ... <= |a_K| and
/// NonStandardDiagonal unless every a_k conj(b_k) is real and positive.
ChannelMatrix rank_one_channel(const std::vector<Complex>& a, const std::vector<Complex>& b);

}  // namespace ifc
