#include "doctest.h"

#include <numbers>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "ifc/gaussian_info.hpp"
#include "ifc/oracle.hpp"

using namespace ifc;

namespace {

const double kLog2PiE = std::log2(std::numbers::pi * std::numbers::e);

IndexSet xs(std::initializer_list<int> users) {
  IndexSet out;
  for (int u : users) out.push_back(x_index(u));
  return out;
}

IndexSet ys(int n, std::initializer_list<int> users) {
  IndexSet out;
  for (int u : users) out.push_back(y_index(n, u));
  return out;
}

// Random pairwise disjoint (A, B, C) over `size` variables, A and B nonempty.
void random_sets(CounterRng& rng, int size, IndexSet& a, IndexSet& b, IndexSet& c) {
  std::vector<int> perm(size);
  for (int i = 0; i < size; ++i) perm[i] = i;
  for (int i = size - 1; i > 0; --i) std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
  const int na = 1 + static_cast<int>(rng.next_u64() % 2);
  const int nb = 1 + static_cast<int>(rng.next_u64() % 2);
  const int nc = static_cast<int>(rng.next_u64() % (size - na - nb + 1));
  a.assign(perm.begin(), perm.begin() + na);
  b.assign(perm.begin() + na, perm.begin() + na + nb);
  c.assign(perm.begin() + na + nb, perm.begin() + na + nb + nc);
}

}  // namespace

TEST_CASE("build_joint covariance blocks") {
  const auto one = build_joint(fixtures::channel({{1.0}}), NoiseCorrelation::identity(1));
  CMatrix expected(2, 2);
  expected << 1, 1, 1, 2;
  CHECK((one.cov() - expected).norm() == 0.0);
  CHECK(one.labels() == std::vector<std::string>{"X1", "Y1"});

  const auto diag = build_joint(ChannelMatrix::validate(CMatrix::Identity(2, 2)), NoiseCorrelation::identity(2));
  CHECK(diag.cov()(y_index(2, 0), y_index(2, 0)) == Complex(2.0, 0.0));
  CHECK(std::abs(diag.cov()(y_index(2, 0), y_index(2, 1))) == 0.0);
}

TEST_CASE("genie covariance matches the term-by-term expansion") {
  CounterRng rng(3);
  const ChannelMatrix h = fixtures::random_channel(rng, 2);
  const GenieSpec g{1, Complex(0.5, 0.0), 0};
  const auto j = build_joint(h, NoiseCorrelation::identity(2), std::span<const GenieSpec>(&g, 1));
  const Complex expected = h(0, 0) * std::conj(h(1, 0)) + 0.5;
  CHECK(std::abs(j.cov()(y_index(2, 0), genie_index(2, 0)) - expected) < 1e-14);

  // Sample covariance of (Y1, G2) from the definition itself.
  const int n = 1000000;
  Complex acc = 0.0;
  for (int s = 0; s < n; ++s) {
    const Complex x1 = fixtures::complex_normal(rng), x2 = fixtures::complex_normal(rng);
    const Complex z1 = fixtures::complex_normal(rng), w = fixtures::complex_normal(rng);
    const Complex y1 = h(0, 0) * x1 + h(0, 1) * x2 + z1;
    const Complex zg = std::conj(g.rho) * z1 + std::sqrt(1.0 - std::norm(g.rho)) * w;
    const Complex g2 = h(1, 0) * x1 + zg;
    acc += y1 * std::conj(g2);
  }
  acc /= n;
  // Standard error of each component is below ~2.5e-3 for these gains.
  CHECK(std::abs(acc - expected) < 0.02);
}

TEST_CASE("build_joint argument errors") {
  const ChannelMatrix h = ChannelMatrix::validate(CMatrix::Identity(2, 2));
  const GenieSpec too_large{0, Complex(1.0 - 1e-7, 0.0), 1};
  CHECK_THROWS_WITH_AS(build_joint(h, NoiseCorrelation::identity(2), std::span<const GenieSpec>(&too_large, 1)),
                       doctest::Contains("RhoTooLarge"), Error);
  const GenieSpec bad_index{2, Complex(0.0, 0.0), 0};
  CHECK_THROWS_WITH_AS(build_joint(h, NoiseCorrelation::identity(2), std::span<const GenieSpec>(&bad_index, 1)),
                       doctest::Contains("IndexOutOfRange"), Error);
  CHECK_THROWS_AS(build_joint(h, NoiseCorrelation::identity(3)), Error);
}

TEST_CASE("differential entropy") {
  const JointGaussian one({"U"}, CMatrix::Identity(1, 1));
  CHECK(std::abs(diff_entropy(one, {0}) - 3.0942) < 1e-4);
  CHECK(std::abs(diff_entropy(one, {0}) - kLog2PiE) < 1e-15);

  const JointGaussian two({"U", "V"}, CMatrix::Identity(2, 2));
  CHECK(std::abs(diff_entropy(two, {0, 1}) - 2.0 * kLog2PiE) < 1e-14);

  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix g(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) g(i, k) = fixtures::complex_normal(rng);
    const CMatrix cov = g * g.adjoint() + 0.1 * CMatrix::Identity(4, 4);
    const JointGaussian j({"A", "B", "C", "D"}, cov);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(cov);
    double oracle = 0.0;
    for (int i = 0; i < 4; ++i) oracle += std::log2(std::numbers::pi * std::numbers::e * es.eigenvalues()(i));
    CHECK(std::abs(diff_entropy(j, {0, 1, 2, 3}) - oracle) < 1e-10);
  }

  const JointGaussian singular({"U", "V"}, CMatrix::Ones(2, 2));
  CHECK_THROWS_WITH_AS(diff_entropy(singular, {0, 1}), doctest::Contains("SingularCovariance"), Error);
}

TEST_CASE("conditional mutual information basics") {
  const auto j = build_joint(fixtures::channel({{1.0}}), NoiseCorrelation::identity(1));
  CHECK(std::abs(conditional_mi(j, {y_index(1, 0)}, {x_index(0)}) - 1.0) < 1e-14);

  const JointGaussian indep({"U", "V", "W"}, CMatrix::Identity(3, 3));
  CHECK(conditional_mi(indep, {0}, {1, 2}) == 0.0);

  CHECK_THROWS_WITH_AS(conditional_mi(indep, {0}, {0}), doctest::Contains("LabelOverlap"), Error);
  CHECK_THROWS_WITH_AS(conditional_mi(indep, {0}, {1}, {1}), doctest::Contains("LabelOverlap"), Error);
}

TEST_CASE("conditioning on a singular set uses the pseudo-inverse") {
  // V duplicates U; conditioning on {U, V} must equal conditioning on U.
  CMatrix cov(3, 3);
  cov << 2, 1, 1, 1, 1, 1, 1, 1, 1;
  const JointGaussian j({"A", "U", "V"}, cov);
  CHECK(conditional_entropy(j, {0}, {1, 2}) == doctest::Approx(conditional_entropy(j, {0}, {1})).epsilon(1e-12));
  // A deterministic given the conditioning set is an error.
  CMatrix dup(2, 2);
  dup << 1, 1, 1, 1;
  const JointGaussian d({"U", "V"}, dup);
  CHECK_THROWS_WITH_AS(conditional_entropy(d, {0}, {1}), doctest::Contains("SingularCovariance"), Error);
}

TEST_CASE("Schur path agrees with the four-entropy identity") {
  CounterRng rng(17);
  const int n = 3;
  const ChannelMatrix h = fixtures::random_channel(rng, n);
  const auto j = build_joint(h, fixtures::random_sigma(rng, n));
  const double schur = conditional_mi(j, ys(n, {0, 1, 2}), xs({1}), xs({0}));
  CHECK(std::abs(schur - mi_by_entropy_identity(j, ys(n, {0, 1, 2}), xs({1}), xs({0}))) < 1e-9);

  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 3;
    const auto jt = build_joint(fixtures::random_channel(rng, k), fixtures::random_sigma(rng, k));
    IndexSet a, b, c;
    random_sets(rng, jt.size(), a, b, c);
    CHECK(std::abs(conditional_mi(jt, a, b, c) - mi_by_entropy_identity(jt, a, b, c)) < 1e-9);
  }
}

TEST_CASE("mutual information invariants on random instances") {
  CounterRng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + trial % 4;
    const auto j = build_joint(fixtures::random_channel(rng, k), fixtures::random_sigma(rng, k));
    if (j.size() < 3) continue;
    IndexSet a, b, c;
    random_sets(rng, j.size(), a, b, c);
    const double ab = conditional_mi(j, a, b, c);
    CHECK(ab >= 0.0);
    CHECK(std::abs(ab - conditional_mi(j, b, a, c)) < 1e-9);
    if (b.size() == 2) {
      IndexSet b1{b[0]}, b2{b[1]}, cb1 = c;
      cb1.push_back(b[0]);
      CHECK(std::abs(ab - conditional_mi(j, a, b1, c) - conditional_mi(j, a, b2, cb1)) < 1e-9);
    }
  }
}

TEST_CASE("tiny negative mutual information is clamped to zero") {
  // Independent blocks with roundoff-level coupling.
  CMatrix cov = CMatrix::Identity(2, 2);
  cov(0, 1) = cov(1, 0) = 1e-9;
  const JointGaussian j({"U", "V"}, cov);
  CHECK(conditional_mi(j, {0}, {1}) >= 0.0);
}

TEST_CASE("genie marginal law and cancellation identity") {
  CounterRng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3;
    const ChannelMatrix h = fixtures::random_channel(rng, n);
    // One genie per user of a random ordering of all users, paired as in the
    // genie-aided bound: summand k uses G_{pi_k} paired with Z_k.
    std::vector<int> pi(n);
    for (int i = 0; i < n; ++i) pi[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(pi[i], pi[rng.next_u64() % (i + 1)]);
    std::vector<GenieSpec> genies;
    for (int k = 0; k < n; ++k) {
      const double r = rng.uniform(0.0, kRhoCap);
      genies.push_back({pi[k], std::polar(r, rng.uniform(0.0, 2.0 * std::numbers::pi)), k});
    }
    const auto j = build_joint(h, fixtures::random_sigma(rng, n), genies);
    double lhs = 0.0, rhs = 0.0;
    for (int k = 0; k < n; ++k) {
      const int m = pi[k];
      const double var_g = j.cov()(genie_index(n, k), genie_index(n, k)).real();
      const double var_y_given_x = conditional_covariance(j, {y_index(n, m)}, {x_index(m)})(0, 0).real();
      CHECK(std::abs(var_g - var_y_given_x) < 1e-12);
      lhs += diff_entropy(j, {genie_index(n, k)});
      rhs += conditional_entropy(j, {y_index(n, k)}, {x_index(k)});
    }
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}
