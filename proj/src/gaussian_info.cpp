#include "ifc/gaussian_info.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace ifc {

namespace {

const double kLog2PiE = std::log2(std::numbers::pi * std::numbers::e);

void check_indices(const IndexSet& s, int size, const char* what) {
  for (int i : s)
    if (i < 0 || i >= size) {
      std::ostringstream os;
      os << what << " refers to variable " << i << " outside [0, " << size << ")";
      throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
  IndexSet sorted = s;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::LabelOverlap, std::string(what) + " lists a variable twice");
}

bool intersects(const IndexSet& a, const IndexSet& b) {
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  return false;
}

// Inverse of a Hermitian PSD matrix applied to `rhs`; singular directions
// (eigenvalues below kPinvThreshold * largest) are projected out.
CMatrix psd_solve(const CMatrix& m, const CMatrix& rhs) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-10) return llt.solve(rhs);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double cutoff = kPinvThreshold * std::max(lambda.maxCoeff(), 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > cutoff && lambda(i) > 0.0) inv(i) = 1.0 / lambda(i);
  const CMatrix& v = es.eigenvectors();
  return v * inv.asDiagonal() * (v.adjoint() * rhs);
}

}  // namespace

JointGaussian::JointGaussian(Unchecked, std::vector<std::string> labels, CMatrix cov)
    : labels_(std::move(labels)), cov_(std::move(cov)) {
  for (int i = 0; i < static_cast<int>(labels_.size()); ++i) lookup_.emplace(labels_[i], i);
}

JointGaussian::JointGaussian(std::vector<std::string> labels, CMatrix cov)
    : JointGaussian(Unchecked{}, std::move(labels), std::move(cov)) {
  if (lookup_.size() != labels_.size())
    throw Error(ErrorCode::LabelOverlap, "joint Gaussian labels must be unique");
  if (cov_.rows() != cov_.cols() || cov_.rows() != static_cast<Eigen::Index>(labels_.size()))
    throw Error(ErrorCode::DimensionMismatch, "covariance size does not match label count");
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.adjoint()).cwiseAbs().maxCoeff() > kStructureTolerance * scale)
    throw Error(ErrorCode::NotHermitian, "joint covariance is not Hermitian");
  if (cov_.rows() > 0 && min_eigenvalue(cov_) < -kPsdTolerance)
    throw Error(ErrorCode::NotPSD, "joint covariance is not positive semidefinite");
}

int JointGaussian::index(std::string_view label) const {
  auto it = lookup_.find(std::string(label));
  if (it == lookup_.end())
    throw Error(ErrorCode::IndexOutOfRange, "unknown variable label '" + std::string(label) + "'");
  return it->second;
}

IndexSet JointGaussian::select(const std::vector<std::string>& labels) const {
  IndexSet out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index(l));
  return out;
}

CMatrix JointGaussian::block(const IndexSet& rows, const IndexSet& cols) const {
  CMatrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = cov_(rows[r], cols[c]);
  return out;
}

JointGaussian build_joint(const ChannelMatrix& h, const NoiseCorrelation& sigma,
                          std::span<const GenieSpec> genies) {
  const int k = h.users();
  if (sigma.users() != k)
    throw Error(ErrorCode::DimensionMismatch, "channel and noise correlation sizes differ");
  for (const GenieSpec& g : genies) {
    if (g.target < 0 || g.target >= k || g.paired_with < 0 || g.paired_with >= k)
      throw Error(ErrorCode::IndexOutOfRange, "genie target or pairing outside [1:K]");
    if (std::abs(g.rho) > kRhoCap * (1.0 + 1e-15))
      throw Error(ErrorCode::RhoTooLarge, "genie correlation magnitude exceeds 1 - 1e-6");
  }

  const int ng = static_cast<int>(genies.size());
  const int n = 2 * k + ng;
  const CMatrix& hm = h.gains();
  const CMatrix& s = sigma.matrix();

  // Signal rows of the genies: row m of H with the intended entry removed.
  CMatrix gsig = CMatrix::Zero(ng, k);
  for (int g = 0; g < ng; ++g) {
    gsig.row(g) = hm.row(genies[g].target);
    gsig(g, genies[g].target) = 0.0;
  }

  CMatrix cov = CMatrix::Zero(n, n);
  cov.topLeftCorner(k, k).setIdentity();
  cov.block(k, 0, k, k) = hm;
  cov.block(0, k, k, k) = hm.adjoint();
  cov.block(k, k, k, k) = hm * hm.adjoint() + s;
  if (ng > 0) {
    const int g0 = 2 * k;
    cov.block(g0, 0, ng, k) = gsig;
    cov.block(0, g0, k, ng) = gsig.adjoint();
    CMatrix yg = hm * gsig.adjoint();  // E[Y_i conj(G_g)], signal part
    CMatrix gg = gsig * gsig.adjoint();
    for (int a = 0; a < ng; ++a) {
      const GenieSpec& ga = genies[a];
      for (int i = 0; i < k; ++i) yg(i, a) += ga.rho * s(i, ga.paired_with);
      for (int b = 0; b < ng; ++b) {
        const GenieSpec& gb = genies[b];
        if (a == b)
          gg(a, a) += 1.0;
        else
          gg(a, b) += std::conj(ga.rho) * gb.rho * s(ga.paired_with, gb.paired_with);
      }
    }
    cov.block(k, g0, k, ng) = yg;
    cov.block(g0, k, ng, k) = yg.adjoint();
    cov.block(g0, g0, ng, ng) = gg;
  }

  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < k; ++i) labels.push_back("X" + std::to_string(i + 1));
  for (int i = 0; i < k; ++i) labels.push_back("Y" + std::to_string(i + 1));
  for (int g = 0; g < ng; ++g) {
    std::string base = "G" + std::to_string(genies[g].target + 1);
    std::string label = base;
    for (int dup = 2; std::find(labels.begin(), labels.end(), label) != labels.end(); ++dup)
      label = base + "." + std::to_string(dup);
    labels.push_back(std::move(label));
  }
  return JointGaussian(JointGaussian::Unchecked{}, std::move(labels), std::move(cov));
}

double log_det_hermitian(const CMatrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::LLT<CMatrix> llt(m);
  bool singular = llt.info() != Eigen::Success;
  double min_pivot = 0.0;
  double log_det = 0.0;
  if (!singular) {
    const auto diag = llt.matrixLLT().diagonal().real();
    min_pivot = diag.minCoeff();
    min_pivot *= min_pivot;
    log_det = 2.0 * diag.array().log().sum();
    if (min_pivot <= kSingularFloor)
      singular = true;
    else if (min_pivot < 1e-6)
      singular = min_eigenvalue(m) <= kSingularFloor;  // pivots only bound eigenvalues from above
  }
  if (singular)
    throw Error(ErrorCode::SingularCovariance,
                "covariance has an eigenvalue at or below 1e-12 (deterministic relation)");
  return log_det;
}

CMatrix conditional_covariance(const JointGaussian& j, const IndexSet& a, const IndexSet& given) {
  CMatrix saa = j.block(a, a);
  if (given.empty()) return saa;
  const CMatrix sgg = j.block(given, given);
  const CMatrix sga = j.block(given, a);
  CMatrix schur = saa - sga.adjoint() * psd_solve(sgg, sga);
  return 0.5 * (schur + schur.adjoint());
}

double diff_entropy(const JointGaussian& j, const IndexSet& a) {
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "entropy of an empty variable set");
  check_indices(a, j.size(), "entropy set");
  return static_cast<double>(a.size()) * kLog2PiE + log_det_hermitian(j.block(a, a)) / std::numbers::ln2;
}

double conditional_entropy(const JointGaussian& j, const IndexSet& a, const IndexSet& given) {
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "entropy of an empty variable set");
  check_indices(a, j.size(), "entropy set");
  check_indices(given, j.size(), "conditioning set");
  if (intersects(a, given)) throw Error(ErrorCode::LabelOverlap, "entropy and conditioning sets overlap");
  return static_cast<double>(a.size()) * kLog2PiE +
         log_det_hermitian(conditional_covariance(j, a, given)) / std::numbers::ln2;
}

double conditional_mi(const JointGaussian& j, const IndexSet& a, const IndexSet& b, const IndexSet& c) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::InvalidArgument, "mutual information needs two nonempty sets");
  check_indices(a, j.size(), "first set");
  check_indices(b, j.size(), "second set");
  check_indices(c, j.size(), "conditioning set");
  if (intersects(a, b) || intersects(a, c) || intersects(b, c))
    throw Error(ErrorCode::LabelOverlap, "mutual information sets must be pairwise disjoint");

  IndexSet bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  const double ld_given_c = log_det_hermitian(conditional_covariance(j, a, c));
  const double ld_given_bc = log_det_hermitian(conditional_covariance(j, a, bc));
  const double mi = (ld_given_c - ld_given_bc) / std::numbers::ln2;
  if (mi >= 0.0) return mi;
  if (mi > -kClampTolerance) return 0.0;
  std::ostringstream os;
  os << "mutual information evaluated to " << mi << " bits";
  throw Error(ErrorCode::InternalInconsistency, os.str());
}

}  // namespace ifc
