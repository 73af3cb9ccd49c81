#include "ifc/outer_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>

#include <Eigen/Cholesky>
#include <sstream>

#include "ifc/achievability.hpp"
#include "ifc/construct.hpp"
#include "ifc/correlation_param.hpp"
#include "ifc/gaussian_info.hpp"
#include "ifc/nelder_mead.hpp"
#include "ifc/rng.hpp"

namespace ifc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRestartSpreadWarning = 1e-3;
const double kLog2PiE = std::log2(std::numbers::pi * std::numbers::e);

std::uint64_t term_key(const BoundTerm& t) {
  std::uint64_t key = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    key ^= v + 1;
    key *= 0x100000001b3ULL;
  };
  for (int s : t.subset) mix(static_cast<std::uint64_t>(s));
  mix(0xffff);
  for (int p : t.perm) mix(static_cast<std::uint64_t>(p));
  return key;
}

void check_users(int users) {
  if (users < 1) throw Error(ErrorCode::InvalidArgument, "number of users must be at least 1");
}

std::vector<BoundTerm> permutations_of(std::vector<int> subset) {
  std::vector<BoundTerm> out;
  std::vector<int> perm = subset;
  do {
    out.push_back({subset, perm});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Cholesky form of a KRA term used inside the optimizer. With everything
// outside {pi_k..pi_s} known, Y_{pi_1..pi_k} has covariance
// M_k = G_k G_k^H + Sigma_S with G_k = H[pi, {pi_k..pi_s}], so step k adds the
// log of the k-th squared pivot of M_k minus that of Sigma_S.
class FastKraTerm {
 public:
  FastKraTerm(const ChannelMatrix& h, const BoundTerm& t) {
    const int s = static_cast<int>(t.perm.size());
    for (int k = 0; k < s; ++k) {
      CMatrix g(s, s - k);
      for (int a = 0; a < s; ++a)
        for (int c = k; c < s; ++c) g(a, c - k) = h(t.perm[a], t.perm[c]);
      gram_.push_back(g * g.adjoint());
    }
  }

  /// Sigma_S in ordering positions; nullopt when a pivot is too small, in
  /// which case the caller falls back to the general engine.
  std::optional<double> operator()(const CMatrix& sub) const {
    const int s = static_cast<int>(gram_.size());
    Eigen::LLT<CMatrix> noise(sub);
    if (noise.info() != Eigen::Success) return std::nullopt;
    const CMatrix ln = noise.matrixL();
    double total = 0.0;
    for (int k = 0; k < s; ++k) {
      Eigen::LLT<CMatrix> out((gram_[k] + sub).topLeftCorner(k + 1, k + 1));
      if (out.info() != Eigen::Success) return std::nullopt;
      const double pm = std::norm(out.matrixLLT()(k, k));
      const double pn = std::norm(ln(k, k));
      if (!(pm > kSingularFloor) || !(pn > kSingularFloor)) return std::nullopt;
      total += std::log(pm / pn);
    }
    return total / std::numbers::ln2;
  }

 private:
  std::vector<CMatrix> gram_;
};

}  // namespace

void check_term(int users, const BoundTerm& t) {
  if (t.subset.empty()) throw Error(ErrorCode::InvalidArgument, "bound term subset must be nonempty");
  for (std::size_t i = 0; i < t.subset.size(); ++i) {
    if (t.subset[i] < 0 || t.subset[i] >= users)
      throw Error(ErrorCode::IndexOutOfRange, "bound term refers to a user outside [1:K]");
    if (i > 0 && t.subset[i] <= t.subset[i - 1])
      throw Error(ErrorCode::InvalidArgument, "bound term subset must be strictly increasing");
  }
  std::vector<int> sorted = t.perm;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != t.subset) throw Error(ErrorCode::InvalidArgument, "bound term ordering is not a permutation of its subset");
}

std::uint64_t count_terms(int users) {
  check_users(users);
  if (users > 20) throw Error(ErrorCode::TooLarge, "term count overflows 64 bits beyond K = 20");
  std::uint64_t total = 0;
  std::uint64_t falling = 1;  // K! / (K - k)!
  for (int k = 1; k <= users; ++k) {
    falling *= static_cast<std::uint64_t>(users - k + 1);
    total += falling;
  }
  return total;
}

std::vector<BoundTerm> enumerate_terms(int users) {
  check_users(users);
  if (users > kMaxFullEnumerationUsers)
    throw Error(ErrorCode::TooLarge, "full enumeration is capped at K = " + std::to_string(kMaxFullEnumerationUsers));
  std::vector<BoundTerm> out;
  out.reserve(count_terms(users));
  for (int size = 1; size <= users; ++size) {
    // Lexicographic combinations via a selection mask.
    std::vector<bool> mask(users, false);
    std::fill(mask.begin(), mask.begin() + size, true);
    do {
      std::vector<int> subset;
      for (int i = 0; i < users; ++i)
        if (mask[i]) subset.push_back(i);
      auto perms = permutations_of(std::move(subset));
      out.insert(out.end(), perms.begin(), perms.end());
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return out;
}

std::vector<BoundTerm> sum_rate_terms(int users) {
  check_users(users);
  if (users > kMaxSumRateOnlyUsers)
    throw Error(ErrorCode::TooLarge, "sum-rate enumeration is capped at K = " + std::to_string(kMaxSumRateOnlyUsers));
  std::vector<int> all(users);
  std::iota(all.begin(), all.end(), 0);
  return permutations_of(std::move(all));
}

double kra_term_value(const ChannelMatrix& h, const NoiseCorrelation& sigma, const BoundTerm& t) {
  const int n = h.users();
  check_term(n, t);
  const JointGaussian joint = build_joint(h, sigma);

  IndexSet given;  // X(S^c), then X and Y of the users already peeled off
  for (int u = 0; u < n; ++u)
    if (!std::binary_search(t.subset.begin(), t.subset.end(), u)) given.push_back(x_index(u));

  double total = 0.0;
  const std::size_t s = t.perm.size();
  for (std::size_t k = 0; k < s; ++k) {
    IndexSet inputs;
    for (std::size_t r = k; r < s; ++r) inputs.push_back(x_index(t.perm[r]));
    total += conditional_mi(joint, {y_index(n, t.perm[k])}, inputs, given);
    given.push_back(x_index(t.perm[k]));
    given.push_back(y_index(n, t.perm[k]));
  }
  return total;
}

KraMinimum kra_term_min(const ChannelMatrix& h, const BoundTerm& t, const OptimizerConfig& cfg) {
  cfg.check();
  const int n = h.users();
  check_term(n, t);
  const int s = static_cast<int>(t.perm.size());
  const CMatrix identity = CMatrix::Identity(n, n);

  auto embed = [&](const CMatrix& sub) {
    CMatrix full = identity;
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) full(t.perm[a], t.perm[b]) = sub(a, b);
    return full;
  };
  int evals = 0;
  auto evaluate = [&](const CMatrix& full) {
    ++evals;
    try {
      return kra_term_value(h, NoiseCorrelation::trusted(full), t);
    } catch (const Error&) {
      return kInf;
    }
  };

  KraMinimum best{evaluate(identity), NoiseCorrelation::trusted(identity), {}, 0};
  if (s == 1) {
    best.evals = evals;
    return best;
  }
  auto consider = [&](const CMatrix& full, double value) {
    if (value < best.value) {
      best.value = value;
      best.sigma = NoiseCorrelation::trusted(full);
    }
  };
  const FastKraTerm fast(h, t);
  const Objective objective = [&](std::span<const double> angles) {
    const CMatrix sub = correlation_from_angles(s, angles);
    if (auto v = fast(sub)) {
      ++evals;
      return *v;
    }
    return evaluate(embed(sub));
  };

  std::vector<std::vector<double>> starts{identity_angles(s)};

  // Correlation that makes this ordering's sub-channel degraded step by step;
  // when it is a valid correlation matrix the term equals the successive
  // decoding sum there, which is often the minimum.
  {
    CMatrix sub(s, s);
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) sub(a, b) = h(t.perm[a], t.perm[b]);
    CMatrix cand = invert_z_recursion(sub);
    if (min_eigenvalue(cand) >= -kPsdTolerance) {
      consider(embed(cand), evaluate(embed(cand)));
      CMatrix shrunk = (1.0 - 1e-9) * cand + 1e-9 * CMatrix::Identity(s, s);
      if (auto angles = angles_from_correlation(shrunk)) starts.push_back(std::move(*angles));
    }
  }

  const int dims = correlation_angle_count(s);
  double grid_best = kInf;
  if (s <= cfg.grid_fallback_K) {
    constexpr int kGrid = 16;
    std::vector<double> x(dims), best_x;
    std::vector<int> idx(dims, 0);
    while (true) {
      for (int d = 0; d < dims; ++d) x[d] = std::numbers::pi * (idx[d] + 0.5) / kGrid;
      const double v = objective(x);
      if (v < grid_best) {
        grid_best = v;
        best_x = x;
      }
      int d = 0;
      while (d < dims && ++idx[d] == kGrid) idx[d++] = 0;
      if (d == dims) break;
    }
    if (!best_x.empty()) {
      consider(embed(correlation_from_angles(s, best_x)), grid_best);
      starts.push_back(best_x);
    }
  }

  SimplexOptions opts;
  opts.max_evals = cfg.max_evals;
  opts.initial_step = 0.5;
  opts.ftol = cfg.tolerance * 1e-2;
  opts.xtol = 1e-6;

  const std::uint64_t key = term_key(t);
  std::vector<double> finals;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> start;
    if (r < static_cast<int>(starts.size())) {
      start = starts[r];
    } else {
      CounterRng rng(derive_seed(cfg.seed, key, static_cast<std::uint64_t>(r)));
      start.resize(dims);
      for (double& a : start) a = rng.uniform(0.0, std::numbers::pi);
    }
    const SimplexResult res = nelder_mead(objective, std::move(start), opts);
    finals.push_back(res.value);
    const CMatrix full = embed(correlation_from_angles(s, res.x));
    consider(full, evaluate(full));
  }

  const auto [lo, hi] = std::minmax_element(finals.begin(), finals.end());
  if (std::isfinite(*hi) && *hi - *lo > kRestartSpreadWarning) {
    std::ostringstream os;
    os << "BudgetExhaustedWarning: restarts disagree by " << (*hi - *lo) << " bits";
    best.warnings.push_back(os.str());
  }
  if (grid_best < *lo - 1e-6) {
    std::ostringstream os;
    os << "grid search beat the local optimizer by " << (*lo - grid_best) << " bits";
    best.warnings.push_back(os.str());
  }
  best.evals = evals;
  return best;
}

double etw_summand(const ChannelMatrix& h, int k, int m, Complex rho) {
  const int n = h.users();
  const GenieSpec genie{m, rho, k};
  const JointGaussian joint = build_joint(h, NoiseCorrelation::identity(n), std::span<const GenieSpec>(&genie, 1));
  const int g = genie_index(n, 0);
  const double output_given_genie = conditional_entropy(joint, {y_index(n, k)}, {g});

  IndexSet everything{y_index(n, k)};
  for (int u = 0; u < n; ++u) everything.push_back(x_index(u));
  const double genie_residual = conditional_entropy(joint, {g}, everything);
  const double analytic = kLog2PiE + std::log2(1.0 - std::norm(rho));
  // Roundoff in the Schur complement grows like Var(Y_k) / (1 - |rho|^2).
  const double tolerance = 1e-10 * (1.0 + h.gains().row(k).squaredNorm()) / (1.0 - std::norm(rho));
  if (std::abs(genie_residual - analytic) > tolerance) {
    std::ostringstream os;
    os << "genie residual entropy " << genie_residual << " disagrees with closed form " << analytic;
    throw Error(ErrorCode::InternalInconsistency, os.str());
  }
  return output_given_genie - analytic;
}

double etw_term_value(const ChannelMatrix& h, const BoundTerm& t, const std::vector<Complex>& rhos) {
  check_term(h.users(), t);
  if (rhos.size() != t.subset.size())
    throw Error(ErrorCode::DimensionMismatch, "one genie correlation per user of the subset");
  double total = 0.0;
  for (std::size_t i = 0; i < t.subset.size(); ++i) total += etw_summand(h, t.subset[i], t.perm[i], rhos[i]);
  return total;
}

EtwSummandMinimum etw_summand_min(const ChannelMatrix& h, int k, int m, const OptimizerConfig& cfg) {
  cfg.check();
  const int n = h.users();
  if (k < 0 || k >= n || m < 0 || m >= n) throw Error(ErrorCode::IndexOutOfRange, "summand users outside [1:K]");

  auto rho_of = [](std::span<const double> p) {
    const double r = kRhoCap * 0.5 * (1.0 - std::cos(p[0]));
    return std::polar(r, p[1]);
  };
  auto f = [&](Complex rho) {
    try {
      return etw_summand(h, k, m, rho);
    } catch (const Error&) {
      return kInf;
    }
  };
  const Objective objective = [&](std::span<const double> p) { return f(rho_of(p)); };

  EtwSummandMinimum best{f(Complex(0.0, 0.0)), Complex(0.0, 0.0)};
  std::vector<double> grid_start{0.0, 0.0};
  double grid_value = kInf;
  constexpr int kGrid = 8;
  for (int a = 0; a < kGrid; ++a)
    for (int b = 0; b < kGrid; ++b) {
      const std::vector<double> p{std::numbers::pi * (a + 0.5) / kGrid, 2.0 * std::numbers::pi * b / kGrid};
      const double v = objective(p);
      if (v < grid_value) {
        grid_value = v;
        grid_start = p;
      }
    }

  SimplexOptions opts;
  opts.max_evals = cfg.max_evals;
  opts.initial_step = 0.4;
  opts.ftol = cfg.tolerance * 1e-2;
  opts.xtol = 1e-7;
  const std::uint64_t key = 0x5eed000000000000ULL + static_cast<std::uint64_t>(k * n + m);
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> start = grid_start;
    if (r > 0) {
      CounterRng rng(derive_seed(cfg.seed, key, static_cast<std::uint64_t>(r)));
      start = {rng.uniform(0.0, std::numbers::pi), rng.uniform(0.0, 2.0 * std::numbers::pi)};
    }
    const SimplexResult res = nelder_mead(objective, std::move(start), opts);
    if (res.value < best.value) {
      best.value = res.value;
      best.rho = rho_of(res.x);
    }
  }
  return best;
}

EtwMinimum etw_term_min(const ChannelMatrix& h, const BoundTerm& t, const OptimizerConfig& cfg) {
  check_term(h.users(), t);
  EtwMinimum out;
  for (std::size_t i = 0; i < t.subset.size(); ++i) {
    const EtwSummandMinimum part = etw_summand_min(h, t.subset[i], t.perm[i], cfg);
    out.value += part.value;
    out.rhos.push_back(part.rho);
  }
  return out;
}

BoundReport region(const ChannelMatrix& h, const OptimizerConfig& cfg, const std::vector<Family>& families,
                   bool sum_rate_only) {
  cfg.check();
  if (families.empty()) throw Error(ErrorCode::InvalidArgument, "at least one bound family is required");
  for (Family f : families)
    if (f != Family::KRA && f != Family::ETW)
      throw Error(ErrorCode::InvalidArgument, "region supports the KRA and ETW families only");
  const int n = h.users();
  const std::vector<BoundTerm> terms = sum_rate_only ? sum_rate_terms(n) : enumerate_terms(n);

  // Each genie summand depends only on (receiver, genie target).
  std::map<std::pair<int, int>, EtwSummandMinimum> etw_cache;
  auto summand = [&](int k, int m) -> const EtwSummandMinimum& {
    auto it = etw_cache.find({k, m});
    if (it == etw_cache.end()) it = etw_cache.emplace(std::make_pair(k, m), etw_summand_min(h, k, m, cfg)).first;
    return it->second;
  };

  BoundReport report{h, {}, kInf, achievable_lower_bounds(h), cfg, families, sum_rate_only, true};
  std::size_t begin = 0;
  while (begin < terms.size()) {
    std::size_t end = begin;
    while (end < terms.size() && terms[end].subset == terms[begin].subset) ++end;

    for (Family fam : families) {
      RateInequality ineq;
      ineq.subset = terms[begin].subset;
      ineq.family = fam;
      ineq.value = kInf;
      for (std::size_t i = begin; i < end; ++i) {
        const BoundTerm& t = terms[i];
        if (fam == Family::KRA) {
          KraMinimum m = kra_term_min(h, t, cfg);
          if (m.value < ineq.value) {
            ineq.value = m.value;
            ineq.perm = t.perm;
            ineq.sigma = m.sigma;
            ineq.warnings = std::move(m.warnings);
          }
        } else {
          double value = 0.0;
          std::vector<Complex> rhos;
          for (std::size_t j = 0; j < t.subset.size(); ++j) {
            const EtwSummandMinimum& part = summand(t.subset[j], t.perm[j]);
            value += part.value;
            rhos.push_back(part.rho);
          }
          if (value < ineq.value) {
            ineq.value = value;
            ineq.perm = t.perm;
            ineq.rhos = std::move(rhos);
          }
        }
      }
      if (static_cast<int>(ineq.subset.size()) == n) report.sum_rate_upper = std::min(report.sum_rate_upper, ineq.value);
      report.inequalities.push_back(std::move(ineq));
    }
    begin = end;
  }
  report.consistent = report.sum_rate_upper >= report.lower_bounds.best() - kCertificationTolerance;
  return report;
}

}  // namespace ifc
