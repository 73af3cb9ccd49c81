#include "doctest.h"

#include "fixtures.hpp"
#include "ifc/achievability.hpp"
#include "ifc/certify.hpp"
#include "ifc/construct.hpp"

using namespace ifc;

namespace {

OptimizerConfig quick() {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.max_evals = 800;
  return cfg;
}

}  // namespace

TEST_CASE("degradedness witness") {
  CHECK(degradedness_witness(ChannelMatrix::validate(CMatrix::Identity(3, 3)), NoiseCorrelation::identity(3)).passed);

  const DegradednessWitness w =
      degradedness_witness(fixtures::channel({{1.0, 0.9}, {0.0, 1.0}}), NoiseCorrelation::identity(2));
  CHECK_FALSE(w.passed);
  CHECK(w.max_coefficient_residual() > 0.1);
  CHECK(w.max_mi_residual() > 0.1);
}

TEST_CASE("noise correlation recovery inverts the construction") {
  CounterRng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const NoiseCorrelation s = fixtures::random_sigma(rng, n);
    const auto gains = fixtures::log_uniform(rng, n, 0.25, 4.0);
    const ChannelMatrix h = build_z_channel(s, gains);
    const auto recovered = recover_noise_correlation(h);
    REQUIRE(recovered.has_value());
    const ChannelMatrix rebuilt = build_z_channel(*recovered, gains);
    CHECK((rebuilt.gains() - h.gains()).cwiseAbs().maxCoeff() < 1e-9);
  }
  // |h12| > h22 would need |rho| > 1.
  CHECK_FALSE(recover_noise_correlation(fixtures::channel({{1.0, 1.5}, {0.0, 1.0}})).has_value());
}

TEST_CASE("Z channels certify through the first path") {
  CounterRng rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const ChannelMatrix h = build_z_channel(fixtures::random_sigma(rng, n), fixtures::log_uniform(rng, n, 0.25, 4.0));
    const Certificate c = certify_sum_capacity(h, quick());
    CHECK(c.status == CertificateStatus::Certified);
    REQUIRE(c.path.has_value());
    CHECK(*c.path == CertificatePath::ZTheorem2);
    CHECK(std::abs(c.gap) <= kCertificationTolerance);
    CHECK(std::abs(c.lower - tin_sum_rate(h)) < 1e-12);
    CHECK(c.sigma.has_value());
  }
}

TEST_CASE("rank-one channels certify as degraded") {
  const Certificate c = certify_sum_capacity(rank_one_channel({1.0, 2.0}, {1.0, 1.0}), quick());
  CHECK(c.status == CertificateStatus::Certified);
  REQUIRE(c.path.has_value());
  CHECK(*c.path == CertificatePath::Degraded);
  CHECK(std::abs(c.upper - std::log2(7.5)) < 1e-12);
  CHECK(std::abs(c.gap) <= kCertificationTolerance);
}

TEST_CASE("many-to-one channels within the condition certify") {
  const Certificate c = certify_sum_capacity(many_to_one({0.6, Complex(0.0, 0.6)}, {1.0, 2.0, 0.5}), quick());
  CHECK(c.status == CertificateStatus::Certified);
  CHECK(*c.path == CertificatePath::ZTheorem2);
}

TEST_CASE("lower-triangular entries that keep MAC feasibility certify through the third path") {
  // Start from a Z channel and add interference the earlier receivers can decode.
  const ChannelMatrix z = build_z_channel(NoiseCorrelation::identity(2), {1.0, 1.0});
  CMatrix g = z.gains();
  g(1, 0) = 3.0;  // receiver 2 hears user 1 strongly
  const ChannelMatrix h = ChannelMatrix::validate(g);
  REQUIRE(mac_feasibility(h).feasible);
  const Certificate c = certify_sum_capacity(h, quick());
  CHECK(c.status == CertificateStatus::Certified);
  REQUIRE(c.path.has_value());
  CHECK(*c.path == CertificatePath::MacTheorem3);
  CHECK(std::abs(c.upper - 2.0) < 1e-9);
}

TEST_CASE("weak symmetric interference is bound-only") {
  const Certificate c = certify_sum_capacity(fixtures::channel({{1.0, 0.5}, {0.5, 1.0}}), quick());
  CHECK(c.status == CertificateStatus::BoundOnly);
  CHECK_FALSE(c.path.has_value());
  CHECK(c.gap > 1e-3);
  CHECK(c.upper >= c.lower);
  CHECK_FALSE(c.details.empty());
}

TEST_CASE("certification is deterministic") {
  const ChannelMatrix h = fixtures::channel({{1.0, 0.4}, {0.7, 1.2}});
  const Certificate a = certify_sum_capacity(h, quick());
  const Certificate b = certify_sum_capacity(h, quick());
  CHECK(a.upper == b.upper);
  CHECK(a.details == b.details);
}
