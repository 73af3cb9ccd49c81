#pragma once

#include <cstdint>

#include "ifc/gaussian_info.hpp"
#include "ifc/outer_bound.hpp"

// Validation paths that share no code with the main computations: a sampling
// estimator of conditional mutual information, an eigenvalue-based entropy
// identity, and an exhaustive search over noise correlations.
namespace ifc {

struct McEstimate {
  double estimate = 0.0;        // bits
  double standard_error = 0.0;  // bits
};

inline constexpr std::uint64_t kMinMcSamples = 10000;

/// Sample mean of log2 p(A | B, C) - log2 p(A | C) over draws of the joint.
/// Throws InvalidArgument (fewer than 10^4 samples, empty A or B),
/// LabelOverlap, SingularCovariance.
McEstimate mc_mutual_information(const JointGaussian& j, const IndexSet& a, const IndexSet& b,
                                 const IndexSet& c, std::uint64_t n_samples, std::uint64_t seed);

/// h(A,C) + h(B,C) - h(C) - h(A,B,C), each entropy from the eigenvalues of
/// the corresponding covariance block.
double mi_by_entropy_identity(const JointGaussian& j, const IndexSet& a, const IndexSet& b,
                              const IndexSet& c = {});

struct GridMinimum {
  double value = 0.0;
  NoiseCorrelation sigma;
  std::uint64_t evaluations = 0;
};

/// Exhaustive search for the minimum of the KRA term over noise correlations,
/// K <= 3. A two-user block is searched on a resolution x resolution grid in
/// (|rho|, arg rho), a three-user block on a resolution^6 grid of
/// hyperspherical angles; the best cells are then refined by pattern search.
/// resolution = 1 evaluates the identity only. Throws TooLarge for K > 3.
GridMinimum grid_min_sigma(const ChannelMatrix& h, const BoundTerm& t, int resolution);

}  // namespace ifc
