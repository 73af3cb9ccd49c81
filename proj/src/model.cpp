#include "ifc/model.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace ifc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonPositiveDiagonal: return "NonPositiveDiagonal";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitDiagonal: return "NotUnitDiagonal";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RhoTooLarge: return "RhoTooLarge";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::LabelOverlap: return "LabelOverlap";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::WitnessFailure: return "WitnessFailure";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::NonStandardDiagonal: return "NonStandardDiagonal";
    case ErrorCode::NotSorted: return "NotSorted";
    case ErrorCode::BetaInvalid: return "BetaInvalid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::KRA: return "KRA";
    case Family::ETW: return "ETW";
    case Family::BC: return "BC";
  }
  return "?";
}

std::string_view to_string(CertificateStatus s) {
  return s == CertificateStatus::Certified ? "CERTIFIED" : "BOUND_ONLY";
}

std::string_view to_string(CertificatePath p) {
  switch (p) {
    case CertificatePath::ZTheorem2: return "Z_THEOREM2";
    case CertificatePath::Degraded: return "DEGRADED";
    case CertificatePath::MacTheorem3: return "MAC_THEOREM3";
    case CertificatePath::NumericMatch: return "NUMERIC_MATCH";
  }
  return "?";
}

namespace {

void require_square_finite(const CMatrix& raw, const char* what) {
  if (raw.rows() == 0 || raw.rows() != raw.cols()) {
    std::ostringstream os;
    os << what << " must be a non-empty square matrix, got " << raw.rows() << "x" << raw.cols();
    throw Error(ErrorCode::NonSquare, os.str());
  }
  for (Eigen::Index i = 0; i < raw.rows(); ++i)
    for (Eigen::Index j = 0; j < raw.cols(); ++j)
      if (!std::isfinite(raw(i, j).real()) || !std::isfinite(raw(i, j).imag())) {
        std::ostringstream os;
        os << what << " entry (" << i + 1 << "," << j + 1 << ") is not finite";
        throw Error(ErrorCode::NonFinite, os.str());
      }
}

}  // namespace

double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ChannelMatrix ChannelMatrix::validate(const CMatrix& raw) {
  require_square_finite(raw, "channel matrix");
  for (Eigen::Index k = 0; k < raw.rows(); ++k) {
    const Complex d = raw(k, k);
    if (d.imag() != 0.0 || !(d.real() > 0.0)) {
      std::ostringstream os;
      os << "direct gain h(" << k + 1 << "," << k + 1 << ") = (" << d.real() << "," << d.imag()
         << ") must be real and strictly positive";
      throw Error(ErrorCode::NonPositiveDiagonal, os.str());
    }
  }
  return ChannelMatrix(raw);
}

bool ChannelMatrix::is_upper_triangular() const {
  for (Eigen::Index i = 0; i < h_.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (h_(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

NoiseCorrelation NoiseCorrelation::validate(const CMatrix& raw) {
  require_square_finite(raw, "noise correlation");
  const Eigen::Index n = raw.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(raw(i, i) - Complex(1.0, 0.0)) > kStructureTolerance) {
      std::ostringstream os;
      os << "diagonal entry " << i + 1 << " is (" << raw(i, i).real() << "," << raw(i, i).imag()
         << "), expected 1";
      throw Error(ErrorCode::NotUnitDiagonal, os.str());
    }
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(raw(i, j) - std::conj(raw(j, i))) > kStructureTolerance) {
        std::ostringstream os;
        os << "entries (" << i + 1 << "," << j + 1 << ") and (" << j + 1 << "," << i + 1
           << ") are not conjugates";
        throw Error(ErrorCode::NotHermitian, os.str());
      }
  }
  CMatrix s = 0.5 * (raw + raw.adjoint());
  for (Eigen::Index i = 0; i < n; ++i) s(i, i) = 1.0;
  const double lambda = min_eigenvalue(s);
  if (lambda < -kPsdTolerance) {
    std::ostringstream os;
    os << "smallest eigenvalue " << lambda << " is below -" << kPsdTolerance;
    throw Error(ErrorCode::NotPSD, os.str());
  }
  return NoiseCorrelation(std::move(s));
}

NoiseCorrelation NoiseCorrelation::identity(int users) {
  if (users < 1) throw Error(ErrorCode::NonSquare, "identity correlation needs at least one user");
  return NoiseCorrelation(CMatrix::Identity(users, users));
}

void OptimizerConfig::check() const {
  if (restarts < 1 || max_evals < 1 || grid_fallback_K < 0 || !(tolerance > 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "optimizer counts must be positive and tolerance strictly positive");
}

}  // namespace ifc
