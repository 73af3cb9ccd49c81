#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ifc/model.hpp"

// Entropies and mutual informations of zero-mean circularly-symmetric complex
// Gaussian vectors. All results are in bits.
namespace ifc {

/// Largest admissible genie correlation magnitude.
inline constexpr double kRhoCap = 1.0 - 1e-6;
/// Eigenvalue (and Cholesky pivot) floor for a covariance treated as nonsingular.
inline constexpr double kSingularFloor = 1e-12;
/// Relative threshold of the eigenvalue-thresholded pseudo-inverse.
inline constexpr double kPinvThreshold = 1e-12;
/// Negative mutual informations down to this value are clamped to zero.
inline constexpr double kClampTolerance = 1e-12;

/// Side information G_target ~ Y_target | X_target whose noise has correlation
/// `rho` with the channel noise Z_paired_with.
struct GenieSpec {
  int target = 0;
  Complex rho{0.0, 0.0};
  int paired_with = 0;
};

using IndexSet = std::vector<int>;

class JointGaussian {
 public:
  /// Validates label uniqueness, Hermitian symmetry and PSD-ness of `cov`.
  JointGaussian(std::vector<std::string> labels, CMatrix cov);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const CMatrix& cov() const noexcept { return cov_; }

  int index(std::string_view label) const;
  IndexSet select(const std::vector<std::string>& labels) const;

  /// Covariance restricted to rows `rows` and columns `cols`.
  CMatrix block(const IndexSet& rows, const IndexSet& cols) const;

 private:
  struct Unchecked {};
  JointGaussian(Unchecked, std::vector<std::string> labels, CMatrix cov);
  friend JointGaussian build_joint(const ChannelMatrix&, const NoiseCorrelation&,
                                   std::span<const GenieSpec>);

  std::vector<std::string> labels_;
  CMatrix cov_;
  std::unordered_map<std::string, int> lookup_;
};

// Variable layout produced by build_joint: X1..XK, Y1..YK, then one G per genie.
inline int x_index(int k) { return k; }
inline int y_index(int users, int k) { return users + k; }
inline int genie_index(int users, int g) { return 2 * users + g; }

/// Joint law of inputs X (iid unit power), outputs Y = H X + Z with
/// E[Z Z^H] = sigma, and genie signals
///   G_m = sum_{j != m} h_{m,j} X_j + Zg,  Zg = conj(rho) Z_k + sqrt(1 - |rho|^2) W_m,
/// with W_m standard and independent of everything else, so that
/// E[Z_k conj(Zg)] = rho and Var(Zg) = 1.
/// Throws Error{DimensionMismatch, IndexOutOfRange, RhoTooLarge}.
JointGaussian build_joint(const ChannelMatrix& h, const NoiseCorrelation& sigma,
                          std::span<const GenieSpec> genies = {});

/// Natural-log determinant of a Hermitian PD matrix; throws SingularCovariance
/// when the smallest eigenvalue is not above kSingularFloor.
double log_det_hermitian(const CMatrix& m);

/// Schur complement cov_A - cov_{A,C} cov_C^+ cov_{C,A}.
CMatrix conditional_covariance(const JointGaussian& j, const IndexSet& a, const IndexSet& given);

/// h(A) = log2 det(pi e cov_A).
double diff_entropy(const JointGaussian& j, const IndexSet& a);

/// h(A | C) = log2 det(pi e cov_{A|C}).
double conditional_entropy(const JointGaussian& j, const IndexSet& a, const IndexSet& given);

/// I(A; B | C) = log2 det cov_{A|C} - log2 det cov_{A|B,C}.
/// Throws Error{InvalidArgument, LabelOverlap, SingularCovariance, InternalInconsistency}.
double conditional_mi(const JointGaussian& j, const IndexSet& a, const IndexSet& b,
                      const IndexSet& c = {});

}  // namespace ifc
