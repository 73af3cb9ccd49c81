#pragma once

#include <optional>
#include <vector>

#include "ifc/model.hpp"

namespace ifc {

inline constexpr double kWitnessTolerance = 1e-9;

struct DegradednessWitness {
  bool passed = true;
  // Index k-2 holds the residuals of step k = 2..K.
  std::vector<double> coefficient_residuals;  // max |coef on X_k| in the regression
  std::vector<double> mi_residuals;           // |I(Y_1..Y_{k-1}; X_k | Y_k, X_1..X_{k-1})| bits, unclamped

  double max_coefficient_residual() const;
  double max_mi_residual() const;
};

/// For each k = 2..K: regress (Y_1..Y_{k-1}) on (Y_k, X_1..X_k) and check that
/// X_k carries no weight, i.e. given X_1..X_{k-1} the outputs Y_1..Y_{k-1} are a
/// degraded version of Y_k. Passes iff both residual families are <= 1e-9.
DegradednessWitness degradedness_witness(const ChannelMatrix& h, const NoiseCorrelation& sigma);

/// invert_z_recursion followed by validation; nullopt when the recovered
/// matrix is not a valid correlation matrix.
std::optional<NoiseCorrelation> recover_noise_correlation(const ChannelMatrix& h);

/// Tries, in order, the Z-channel path, the rank-one path, the MAC path and a
/// numeric match of the optimized outer bound against the achievable rates.
Certificate certify_sum_capacity(const ChannelMatrix& h, const OptimizerConfig& cfg);

}  // namespace ifc
