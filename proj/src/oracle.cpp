#include "ifc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ifc/rng.hpp"

namespace ifc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sets(const JointGaussian& j, const IndexSet& a, const IndexSet& b, const IndexSet& c) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "A and B must be nonempty");
  std::vector<int> all;
  for (const IndexSet* s : {&a, &b, &c})
    for (int i : *s) {
      if (i < 0 || i >= j.size()) throw Error(ErrorCode::IndexOutOfRange, "variable index out of range");
      all.push_back(i);
    }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw Error(ErrorCode::LabelOverlap, "A, B and C must be pairwise disjoint");
}

// Gaussian law of the block `a` given the block `d`, both as positions in a
// covariance `cov`: mean = w * d, covariance = l l^H.
struct ConditionalLaw {
  CMatrix w;
  CMatrix l;
  double log_det = 0.0;  // natural log of det(l l^H)

  ConditionalLaw(const CMatrix& cov, const std::vector<int>& a, const std::vector<int>& d) {
    auto pick = [&](const std::vector<int>& r, const std::vector<int>& c) {
      CMatrix m(r.size(), c.size());
      for (std::size_t x = 0; x < r.size(); ++x)
        for (std::size_t y = 0; y < c.size(); ++y) m(x, y) = cov(r[x], c[y]);
      return m;
    };
    CMatrix q = pick(a, a);
    w = CMatrix::Zero(a.size(), d.size());
    if (!d.empty()) {
      Eigen::LLT<CMatrix> dd(pick(d, d));
      if (dd.info() != Eigen::Success)
        throw Error(ErrorCode::SingularCovariance, "conditioning block is singular");
      const CMatrix da = pick(d, a);
      w = dd.solve(da).adjoint();
      q -= w * da;
    }
    q = 0.5 * (q + q.adjoint()).eval();
    Eigen::LLT<CMatrix> qq(q);
    if (qq.info() != Eigen::Success) throw Error(ErrorCode::SingularCovariance, "conditional covariance is singular");
    l = qq.matrixL();
    for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += 2.0 * std::log(l(i, i).real());
  }

  // Natural-log densities of the columns of `av` given the columns of `dv`.
  Eigen::ArrayXd log_density(const CMatrix& av, const CMatrix& dv) const {
    CMatrix r = av;
    if (dv.rows() > 0) r -= w * dv;
    l.triangularView<Eigen::Lower>().solveInPlace(r);
    const double k = static_cast<double>(av.rows());
    return -(k * std::log(std::numbers::pi) + log_det) - r.colwise().squaredNorm().transpose().array();
  }
};

double entropy_from_eigenvalues(const JointGaussian& j, const IndexSet& s) {
  if (s.empty()) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(j.block(s, s), Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (!(lambda > kSingularFloor)) throw Error(ErrorCode::SingularCovariance, "covariance block is singular");
    h += std::log2(std::numbers::pi * std::numbers::e * lambda);
  }
  return h;
}

// --- grid search ---------------------------------------------------------

// Minimal complex arithmetic; std::complex multiplication is much slower
// without -ffast-math and this loop runs ~10^8 times.
struct Cx {
  double re = 0.0, im = 0.0;
};
inline Cx operator+(Cx a, Cx b) { return {a.re + b.re, a.im + b.im}; }
inline Cx operator*(Cx a, Cx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline Cx conj(Cx a) { return {a.re, -a.im}; }
inline double abs2(Cx a) { return a.re * a.re + a.im * a.im; }

// Strict upper triangle of a Hermitian unit-diagonal 3x3 matrix.
struct Corr {
  Cx s01, s02, s12;
};

// Hermitian 3x3 (diagonal real).
struct Herm {
  double d0 = 0.0, d1 = 0.0, d2 = 0.0;
  Cx o01, o02, o12;
};

inline double leading_det(const Herm& m, int k) {
  switch (k) {
    case 0:
      return 1.0;
    case 1:
      return m.d0;
    case 2:
      return m.d0 * m.d1 - abs2(m.o01);
    default:
      return m.d0 * m.d1 * m.d2 + 2.0 * (m.o01 * m.o12 * conj(m.o02)).re - m.d0 * abs2(m.o12) -
             m.d1 * abs2(m.o02) - m.d2 * abs2(m.o01);
  }
}

// KRA term as a function of the correlation block on the term's users, in
// ordering positions. Given everything outside {pi_k..pi_s}, step k sees
// Y_{pi_1..pi_k} with covariance M_k = A_k + Sigma, A_k = G_k G_k^H and
// G_k = H[pi, {pi_k..pi_s}]. The noise terms telescope to log det Sigma.
class TermEvaluator {
 public:
  TermEvaluator(const ChannelMatrix& h, const BoundTerm& t) : s_(static_cast<int>(t.perm.size())) {
    for (int k = 0; k < s_; ++k) {
      double d[3] = {0, 0, 0};
      Cx o[3][3];
      for (int a = 0; a < s_; ++a)
        for (int b = 0; b < s_; ++b) {
          Cx acc;
          for (int c = k; c < s_; ++c) {
            const Complex x = h(t.perm[a], t.perm[c]);
            const Complex y = h(t.perm[b], t.perm[c]);
            acc = acc + Cx{x.real(), x.imag()} * conj(Cx{y.real(), y.imag()});
          }
          if (a == b) d[a] = acc.re;
          o[a][b] = acc;
        }
      a_[k] = Herm{d[0], d[1], d[2], o[0][1], o[0][2], o[1][2]};
    }
  }

  int users() const { return s_; }

  double operator()(const Corr& c) const {
    const Herm sigma{1.0, 1.0, 1.0, c.s01, c.s02, c.s12};
    double ratio = 1.0;
    for (int k = 0; k < s_; ++k) {
      const Herm& a = a_[k];
      const Herm m{a.d0 + 1.0, a.d1 + 1.0, a.d2 + 1.0, a.o01 + c.s01, a.o02 + c.s02, a.o12 + c.s12};
      const double num = leading_det(m, k + 1);
      const double den = leading_det(m, k);
      if (!(num > 0.0) || !(den > 0.0)) return kInf;
      ratio *= num / den;
    }
    const double det_sigma = leading_det(sigma, s_);
    if (!(det_sigma > 0.0)) return kInf;
    return std::log2(ratio / det_sigma);
  }

 private:
  int s_;
  std::array<Herm, 3> a_{};
};

// Parameter vectors: (|rho|, arg rho) for two users, six hyperspherical
// angles for three.
Corr corr_from_params(int s, const std::vector<double>& p) {
  Corr c;
  if (s == 2) {
    c.s01 = {p[0] * std::cos(p[1]), p[0] * std::sin(p[1])};
  } else if (s == 3) {
    const Cx l10{std::cos(p[0]), std::sin(p[0]) * std::cos(p[1])};
    const double l11 = std::sin(p[0]) * std::sin(p[1]);
    const double s2 = std::sin(p[2]), s3 = std::sin(p[3]), s4 = std::sin(p[4]);
    const Cx l20{std::cos(p[2]), s2 * std::cos(p[3])};
    const Cx l21{s2 * s3 * std::cos(p[4]), s2 * s3 * s4 * std::cos(p[5])};
    c.s01 = conj(l10);
    c.s02 = conj(l20);
    const Cx s21 = l20 * conj(l10) + l21 * Cx{l11, 0.0};
    c.s12 = conj(s21);
  }
  return c;
}

bool params_admissible(int s, const std::vector<double>& p) { return s != 2 || (p[0] >= 0.0 && p[0] < 1.0); }

struct Candidate {
  double value = kInf;
  std::vector<double> params;
};

class TopCells {
 public:
  explicit TopCells(std::size_t n) : n_(n) {}
  double threshold() const { return best_.size() < n_ ? kInf : best_.back().value; }
  void offer(double v, const std::vector<double>& p) {
    if (!(v < threshold())) return;
    Candidate c{v, p};
    best_.insert(std::upper_bound(best_.begin(), best_.end(), c,
                                  [](const Candidate& x, const Candidate& y) { return x.value < y.value; }),
                 std::move(c));
    if (best_.size() > n_) best_.pop_back();
  }
  const std::vector<Candidate>& cells() const { return best_; }

 private:
  std::size_t n_;
  std::vector<Candidate> best_;
};

Candidate pattern_search(const TermEvaluator& f, Candidate start, std::vector<double> step, std::uint64_t& evals) {
  const int s = f.users();
  auto eval = [&](const std::vector<double>& p) {
    ++evals;
    return params_admissible(s, p) ? f(corr_from_params(s, p)) : kInf;
  };
  constexpr double kMinStep = 1e-11;
  constexpr int kMaxIterations = 200000;
  for (int it = 0; it < kMaxIterations; ++it) {
    bool moved = false;
    for (std::size_t d = 0; d < step.size(); ++d)
      for (double sign : {1.0, -1.0}) {
        std::vector<double> p = start.params;
        p[d] += sign * step[d];
        const double v = eval(p);
        if (v < start.value) {
          start = {v, std::move(p)};
          moved = true;
        }
      }
    if (!moved) {
      for (double& x : step) x *= 0.5;
      if (*std::max_element(step.begin(), step.end()) < kMinStep) break;
    }
  }
  return start;
}

}  // namespace

McEstimate mc_mutual_information(const JointGaussian& j, const IndexSet& a, const IndexSet& b, const IndexSet& c,
                                 std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < kMinMcSamples) throw Error(ErrorCode::InvalidArgument, "at least 10^4 samples are required");
  check_sets(j, a, b, c);

  IndexSet all = a;
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), c.begin(), c.end());
  const CMatrix cov = j.block(all, all);
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size()), nc = static_cast<int>(c.size());
  std::vector<int> pa(na), pbc(nb + nc), pc(nc);
  for (int i = 0; i < na; ++i) pa[i] = i;
  for (int i = 0; i < nb + nc; ++i) pbc[i] = na + i;
  for (int i = 0; i < nc; ++i) pc[i] = na + nb + i;

  const ConditionalLaw given_bc(cov, pa, pbc);
  const ConditionalLaw given_c(cov, pa, pc);

  // Square-root factor from the eigendecomposition; works for singular joints.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(cov);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix factor = es.eigenvectors() * root.asDiagonal();

  CounterRng rng(derive_seed(seed, 0x4D43ULL));
  const int dim = static_cast<int>(all.size());
  constexpr std::uint64_t kBatch = 4096;
  double mean = 0.0, m2 = 0.0;
  std::uint64_t count = 0;
  while (count < n_samples) {
    const int batch = static_cast<int>(std::min(kBatch, n_samples - count));
    CMatrix w(dim, batch);
    for (int col = 0; col < batch; ++col)
      for (int row = 0; row < dim; ++row) {
        const double re = rng.normal();
        const double im = rng.normal();
        w(row, col) = Complex(re, im) * std::numbers::sqrt2 * 0.5;
      }
    const CMatrix x = factor * w;
    const CMatrix xa = x.topRows(na);
    const Eigen::ArrayXd ratio =
        (given_bc.log_density(xa, x.bottomRows(nb + nc)) - given_c.log_density(xa, x.bottomRows(nc))) /
        std::numbers::ln2;
    for (int i = 0; i < batch; ++i) {
      ++count;
      const double delta = ratio(i) - mean;
      mean += delta / static_cast<double>(count);
      m2 += delta * (ratio(i) - mean);
    }
  }
  const double variance = m2 / static_cast<double>(count - 1);
  return {mean, std::sqrt(variance / static_cast<double>(count))};
}

double mi_by_entropy_identity(const JointGaussian& j, const IndexSet& a, const IndexSet& b, const IndexSet& c) {
  check_sets(j, a, b, c);
  auto join = [](std::initializer_list<const IndexSet*> parts) {
    IndexSet out;
    for (const IndexSet* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
  };
  return entropy_from_eigenvalues(j, join({&a, &c})) + entropy_from_eigenvalues(j, join({&b, &c})) -
         entropy_from_eigenvalues(j, c) - entropy_from_eigenvalues(j, join({&a, &b, &c}));
}

GridMinimum grid_min_sigma(const ChannelMatrix& h, const BoundTerm& t, int resolution) {
  const int n = h.users();
  if (n > 3) throw Error(ErrorCode::TooLarge, "grid search supports K <= 3");
  if (resolution < 1) throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least 1");
  check_term(n, t);

  const TermEvaluator f(h, t);
  const int s = f.users();
  TopCells top(4);
  std::uint64_t evals = 0;
  std::vector<double> step;
  const double res = resolution;

  if (s == 1) {
    top.offer(f(Corr{}), {});
    evals = 1;
  } else if (s == 2) {
    std::vector<double> p(2);
    for (int a = 0; a < resolution; ++a)
      for (int b = 0; b < resolution; ++b) {
        p = {a / res, 2.0 * std::numbers::pi * b / res};
        top.offer(f(corr_from_params(2, p)), p);
        ++evals;
      }
    step = {1.0 / res, 2.0 * std::numbers::pi / res};
  } else {
    const int r = resolution;
    std::vector<double> theta(r), cos_t(r), sin_t(r);
    for (int i = 0; i < r; ++i) {
      theta[i] = std::numbers::pi * (i + 0.5) / res;
      cos_t[i] = std::cos(theta[i]);
      sin_t[i] = std::sin(theta[i]);
    }
    // Rows of the unit-norm factor, tabulated once.
    struct Row1 {
      Cx l10;
      double l11;
    };
    struct Row2 {
      Cx l20, l21;
    };
    std::vector<Row1> row1(static_cast<std::size_t>(r) * r);
    for (int i0 = 0; i0 < r; ++i0)
      for (int i1 = 0; i1 < r; ++i1)
        row1[i0 * r + i1] = {{cos_t[i0], sin_t[i0] * cos_t[i1]}, sin_t[i0] * sin_t[i1]};
    std::vector<Row2> row2(static_cast<std::size_t>(r) * r * r * r);
    for (int i2 = 0; i2 < r; ++i2)
      for (int i3 = 0; i3 < r; ++i3)
        for (int i4 = 0; i4 < r; ++i4)
          for (int i5 = 0; i5 < r; ++i5) {
            const double s23 = sin_t[i2] * sin_t[i3];
            row2[((i2 * r + i3) * r + i4) * r + i5] = {{cos_t[i2], sin_t[i2] * cos_t[i3]},
                                                       {s23 * cos_t[i4], s23 * sin_t[i4] * cos_t[i5]}};
          }
    for (std::size_t u = 0; u < row1.size(); ++u) {
      const Row1& q = row1[u];
      for (std::size_t v = 0; v < row2.size(); ++v) {
        const Row2& w = row2[v];
        const Corr c{conj(q.l10), conj(w.l20), conj(w.l20 * conj(q.l10) + w.l21 * Cx{q.l11, 0.0})};
        const double value = f(c);
        if (value < top.threshold()) {
          const std::size_t i2 = v / (r * r * r), i3 = (v / (r * r)) % r, i4 = (v / r) % r, i5 = v % r;
          top.offer(value, {theta[u / r], theta[u % r], theta[i2], theta[i3], theta[i4], theta[i5]});
        }
      }
    }
    evals = static_cast<std::uint64_t>(row1.size()) * row2.size();
    step.assign(6, std::numbers::pi / res);
  }

  Candidate best = top.cells().empty() ? Candidate{} : top.cells().front();
  if (resolution > 1 && s > 1)
    for (const Candidate& cell : top.cells()) {
      if (!std::isfinite(cell.value)) continue;
      Candidate refined = pattern_search(f, cell, step, evals);
      if (refined.value < best.value) best = std::move(refined);
    }

  CMatrix sigma = CMatrix::Identity(n, n);
  if (s > 1 && !best.params.empty()) {
    const Corr c = corr_from_params(s, best.params);
    const Cx upper[3][3] = {{{}, c.s01, c.s02}, {{}, {}, c.s12}, {{}, {}, {}}};
    for (int a = 0; a < s; ++a)
      for (int b = a + 1; b < s; ++b) {
        const Complex z(upper[a][b].re, upper[a][b].im);
        sigma(t.perm[a], t.perm[b]) = z;
        sigma(t.perm[b], t.perm[a]) = std::conj(z);
      }
  }
  return {best.value, NoiseCorrelation::trusted(sigma), evals};
}

}  // namespace ifc
