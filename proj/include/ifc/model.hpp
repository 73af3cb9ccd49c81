#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ifc/error.hpp"

// Domain types for K-user Gaussian interference channels in standard form:
// unit input power, unit noise variance, real positive direct gains. User
// indices are 0-based in the C++ API and 1-based in every serialized form.
namespace ifc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Eigenvalue floor below which a Hermitian matrix is rejected as not PSD.
inline constexpr double kPsdTolerance = 1e-10;
// Entrywise tolerance for Hermitian symmetry and unit diagonal checks.
inline constexpr double kStructureTolerance = 1e-12;

/// K x K complex gain matrix, row = receiver, column = transmitter.
class ChannelMatrix {
 public:
  /// Throws Error{NonSquare, NonFinite, NonPositiveDiagonal}. Diagonal entries
  /// must already be real; no phase rotation is applied.
  static ChannelMatrix validate(const CMatrix& raw);

  int users() const noexcept { return static_cast<int>(h_.rows()); }
  Complex operator()(int rx, int tx) const { return h_(rx, tx); }
  double direct_gain(int k) const { return h_(k, k).real(); }
  const CMatrix& gains() const noexcept { return h_; }

  bool is_upper_triangular() const;

  friend bool operator==(const ChannelMatrix& a, const ChannelMatrix& b) {
    return a.h_.rows() == b.h_.rows() && a.h_ == b.h_;
  }

 private:
  explicit ChannelMatrix(CMatrix h) : h_(std::move(h)) {}
  CMatrix h_;
};

/// Hermitian, unit-diagonal, PSD coupling of the receiver noises,
/// sigma(i, j) = E[Z_i conj(Z_j)].
class NoiseCorrelation {
 public:
  /// Throws Error{NonSquare, NonFinite, NotHermitian, NotUnitDiagonal, NotPSD}.
  static NoiseCorrelation validate(const CMatrix& raw);
  static NoiseCorrelation identity(int users);
  /// Skips validation; for matrices that are unit-diagonal Hermitian PSD by
  /// construction, such as L L^H with unit-norm rows.
  static NoiseCorrelation trusted(CMatrix s) { return NoiseCorrelation(std::move(s)); }

  int users() const noexcept { return static_cast<int>(sigma_.rows()); }
  Complex operator()(int i, int j) const { return sigma_(i, j); }
  const CMatrix& matrix() const noexcept { return sigma_; }

  friend bool operator==(const NoiseCorrelation& a, const NoiseCorrelation& b) {
    return a.sigma_.rows() == b.sigma_.rows() && a.sigma_ == b.sigma_;
  }

 private:
  explicit NoiseCorrelation(CMatrix s) : sigma_(std::move(s)) {}
  CMatrix sigma_;
};

double min_eigenvalue(const CMatrix& hermitian);

enum class Family { KRA, ETW, BC };
std::string_view to_string(Family f);

struct OptimizerConfig {
  std::uint64_t seed = 0;
  int restarts = 8;
  int max_evals = 2000;
  int grid_fallback_K = 2;
  double tolerance = 1e-7;

  void check() const;
};

/// One retained bound: sum of R_u over `subset` is at most `value` bits.
struct RateInequality {
  std::vector<int> subset;
  Family family = Family::KRA;
  double value = 0.0;
  std::vector<int> perm;
  std::optional<NoiseCorrelation> sigma;  // KRA witness
  std::vector<Complex> rhos;              // ETW witness, one per element of subset
  std::vector<std::string> warnings;
};

struct LowerBounds {
  double tin = 0.0;
  std::optional<double> succ_dec;

  double best() const { return succ_dec ? std::max(tin, *succ_dec) : tin; }
};

struct BoundReport {
  ChannelMatrix channel;
  std::vector<RateInequality> inequalities;
  double sum_rate_upper = 0.0;
  LowerBounds lower_bounds;
  OptimizerConfig config;
  std::vector<Family> families;
  bool sum_rate_only = false;
  bool consistent = true;
};

enum class CertificateStatus { Certified, BoundOnly };
enum class CertificatePath { ZTheorem2, Degraded, MacTheorem3, NumericMatch };
std::string_view to_string(CertificateStatus s);
std::string_view to_string(CertificatePath p);

inline constexpr double kCertificationTolerance = 1e-9;

struct Certificate {
  CertificateStatus status = CertificateStatus::BoundOnly;
  std::optional<CertificatePath> path;
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;
  std::string details;
  std::optional<NoiseCorrelation> sigma;  // witness for the analytic paths
  std::vector<std::string> warnings;
};

}  // namespace ifc
