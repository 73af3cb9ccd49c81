#include "ifc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>

#include "ifc/achievability.hpp"
#include "ifc/construct.hpp"
#include "ifc/gaussian_info.hpp"
#include "ifc/outer_bound.hpp"

namespace ifc {

double DegradednessWitness::max_coefficient_residual() const {
  return coefficient_residuals.empty() ? 0.0
                                       : *std::max_element(coefficient_residuals.begin(), coefficient_residuals.end());
}

double DegradednessWitness::max_mi_residual() const {
  return mi_residuals.empty() ? 0.0 : *std::max_element(mi_residuals.begin(), mi_residuals.end());
}

DegradednessWitness degradedness_witness(const ChannelMatrix& h, const NoiseCorrelation& sigma) {
  const int n = h.users();
  const JointGaussian joint = build_joint(h, sigma);
  DegradednessWitness w;
  for (int k = 1; k < n; ++k) {
    IndexSet earlier_y, earlier_x;
    for (int i = 0; i < k; ++i) {
      earlier_y.push_back(y_index(n, i));
      earlier_x.push_back(x_index(i));
    }
    // Regressors ordered (Y_k, X_1..X_{k-1}, X_k); X_k is the last one.
    IndexSet regressors{y_index(n, k)};
    regressors.insert(regressors.end(), earlier_x.begin(), earlier_x.end());
    regressors.push_back(x_index(k));

    const CMatrix s_dd = joint.block(regressors, regressors);
    const CMatrix s_da = joint.block(regressors, earlier_y);
    const CMatrix coef_t = s_dd.llt().solve(s_da);  // row r = weights of regressor r
    w.coefficient_residuals.push_back(coef_t.row(coef_t.rows() - 1).cwiseAbs().maxCoeff());

    // Unclamped log-det difference: a residual, not a mutual information.
    IndexSet given{y_index(n, k)};
    given.insert(given.end(), earlier_x.begin(), earlier_x.end());
    IndexSet given_x = given;
    given_x.push_back(x_index(k));
    const double ld_given = log_det_hermitian(conditional_covariance(joint, earlier_y, given));
    const double ld_given_x = log_det_hermitian(conditional_covariance(joint, earlier_y, given_x));
    w.mi_residuals.push_back(std::abs(ld_given - ld_given_x) / std::numbers::ln2);
  }
  w.passed = w.max_coefficient_residual() <= kWitnessTolerance && w.max_mi_residual() <= kWitnessTolerance;
  return w;
}

std::optional<NoiseCorrelation> recover_noise_correlation(const ChannelMatrix& h) {
  try {
    return NoiseCorrelation::validate(invert_z_recursion(h.gains()));
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace {

BoundTerm full_identity_term(int n) {
  BoundTerm t;
  t.subset.resize(n);
  std::iota(t.subset.begin(), t.subset.end(), 0);
  t.perm = t.subset;
  return t;
}

double total(const std::vector<double>& r) { return std::accumulate(r.begin(), r.end(), 0.0); }

bool within(double gap) { return std::abs(gap) <= kCertificationTolerance; }

Certificate certified(CertificatePath path, double upper, double lower, std::ostringstream& trace) {
  Certificate c;
  c.status = CertificateStatus::Certified;
  c.path = path;
  c.upper = upper;
  c.lower = lower;
  c.gap = upper - lower;
  trace << to_string(path) << ": upper " << upper << " bits, lower " << lower << " bits.";
  c.details = trace.str();
  return c;
}

}  // namespace

Certificate certify_sum_capacity(const ChannelMatrix& h, const OptimizerConfig& cfg) {
  cfg.check();
  const int n = h.users();
  std::ostringstream trace;
  trace.precision(15);

  const std::optional<NoiseCorrelation> recovered = recover_noise_correlation(h);
  std::optional<DegradednessWitness> witness;
  if (recovered) {
    try {
      witness = degradedness_witness(h, *recovered);
    } catch (const Error& e) {
      witness = DegradednessWitness{};
      witness->passed = false;
      trace << "witness: " << e.what() << ". ";
    }
  }

  // Z channel built by the recursion: the sum-rate bound at the recovered
  // correlation collapses to the successive-decoding sum, achieved by TIN.
  if (h.is_upper_triangular()) {
    if (!recovered) {
      trace << "Z_THEOREM2: recovered noise correlation is not PSD. ";
    } else if (!witness->passed) {
      trace << "Z_THEOREM2: degradedness witness failed (residual " << witness->max_coefficient_residual() << "). ";
    } else {
      try {
        const double upper = kra_term_value(h, *recovered, full_identity_term(n));
        const double lower = tin_sum_rate(h);
        if (within(upper - lower) && within(total(succ_dec_rates(h)) - lower)) {
          Certificate c = certified(CertificatePath::ZTheorem2, upper, lower, trace);
          c.sigma = recovered;
          return c;
        }
        trace << "Z_THEOREM2: bound " << upper << " and TIN " << lower << " differ. ";
      } catch (const Error& e) {
        trace << "Z_THEOREM2: " << e.what() << ". ";
      }
    }
  } else {
    trace << "Z_THEOREM2: channel has nonzero entries below the diagonal. ";
  }

  if (n > 1) {
    if (auto f = rank_one_factor(h)) {
      const ChannelMatrix sorted = relabel(h, f->order);
      std::vector<double> gains(n);
      for (int k = 0; k < n; ++k) gains[k] = sorted.direct_gain(k);
      const double upper = degraded_sum_capacity(f->a, f->b);
      const double lower = total(succ_dec_rates(sorted));
      const double closed_form = rank_one_sum_rate(f->a, gains);
      if (within(upper - lower) && within(closed_form - lower)) {
        trace << "users relabeled by |a_k|: (";
        for (int i = 0; i < n; ++i) trace << (i ? "," : "") << f->order[i] + 1;
        trace << "). ";
        return certified(CertificatePath::Degraded, upper, lower, trace);
      }
      trace << "DEGRADED: broadcast bound " << upper << " and successive decoding " << lower << " differ. ";
    } else {
      trace << "DEGRADED: channel is not rank one. ";
    }
  }

  if (!h.is_upper_triangular() && recovered && witness->passed && n <= kMaxMacUsers) {
    const MacCheckResult mac = mac_feasibility(h);
    if (mac.feasible) {
      try {
        const double upper = kra_term_value(h, *recovered, full_identity_term(n));
        const double lower = total(succ_dec_rates(h));
        if (within(upper - lower)) {
          Certificate c = certified(CertificatePath::MacTheorem3, upper, lower, trace);
          c.sigma = recovered;
          return c;
        }
        trace << "MAC_THEOREM3: bound " << upper << " and rates " << lower << " differ. ";
      } catch (const Error& e) {
        trace << "MAC_THEOREM3: " << e.what() << ". ";
      }
    } else {
      trace << "MAC_THEOREM3: " << mac.violations.size() << " MAC constraint(s) violated. ";
    }
  } else if (!h.is_upper_triangular()) {
    trace << "MAC_THEOREM3: upper triangle is not generated by a valid noise correlation. ";
  }

  const BoundReport report = region(h, cfg, {Family::KRA, Family::ETW}, true);
  const double upper = report.sum_rate_upper;
  const double lower = report.lower_bounds.best();
  std::vector<std::string> warnings;
  for (const auto& ineq : report.inequalities)
    warnings.insert(warnings.end(), ineq.warnings.begin(), ineq.warnings.end());
  if (within(upper - lower)) {
    Certificate c = certified(CertificatePath::NumericMatch, upper, lower, trace);
    c.warnings = std::move(warnings);
    return c;
  }
  Certificate c;
  c.status = CertificateStatus::BoundOnly;
  c.upper = upper;
  c.lower = lower;
  c.gap = upper - lower;
  trace << "NUMERIC_MATCH: optimized sum-rate bound " << upper << " exceeds best achievable " << lower
        << " by " << c.gap << " bits.";
  if (!report.consistent) warnings.push_back("outer bound fell below an achievable rate");
  c.details = trace.str();
  c.warnings = std::move(warnings);
  return c;
}

}  // namespace ifc
