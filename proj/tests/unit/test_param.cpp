#include "doctest.h"

#include <numbers>
#include <set>

#include "fixtures.hpp"
#include "ifc/correlation_param.hpp"
#include "ifc/nelder_mead.hpp"
#include "ifc/rng.hpp"

using namespace ifc;

TEST_CASE("angle parameterization always yields a correlation matrix") {
  CounterRng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> angles(correlation_angle_count(n));
    for (double& a : angles) a = rng.uniform(-10.0, 10.0);
    const CMatrix s = correlation_from_angles(n, angles);
    CHECK_NOTHROW(NoiseCorrelation::validate(s));
  }
  CHECK(correlation_angle_count(3) == 6);
  CHECK((correlation_from_angles(4, identity_angles(4)) - CMatrix::Identity(4, 4)).norm() < 1e-15);
  CHECK_THROWS_AS(correlation_from_angles(3, std::vector<double>(5, 0.0)), Error);
}

TEST_CASE("angles round trip through a positive definite correlation") {
  CounterRng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const NoiseCorrelation s = fixtures::random_sigma(rng, n);
    const auto angles = angles_from_correlation(s.matrix());
    REQUIRE(angles.has_value());
    CHECK((correlation_from_angles(n, *angles) - s.matrix()).norm() < 1e-10);
  }
  CHECK_FALSE(angles_from_correlation(CMatrix::Ones(2, 2) * 2.0).has_value());
}

TEST_CASE("Nelder-Mead minimizes a shifted quadratic") {
  const Objective f = [](std::span<const double> x) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) v += (i + 1.0) * (x[i] - 0.3 * i) * (x[i] - 0.3 * i);
    return v + 1.5;
  };
  const SimplexResult r = nelder_mead(f, {2.0, -1.0, 0.5, 3.0}, {});
  CHECK(r.value == doctest::Approx(1.5).epsilon(1e-9));
  for (std::size_t i = 0; i < r.x.size(); ++i) CHECK(std::abs(r.x[i] - 0.3 * i) < 1e-4);
  CHECK(r.evals <= 2000);

  const SimplexResult zero_dim = nelder_mead([](std::span<const double>) { return 4.0; }, {}, {});
  CHECK(zero_dim.value == 4.0);
  CHECK(zero_dim.evals == 1);
}

TEST_CASE("Nelder-Mead treats non-finite values as infeasible") {
  const Objective f = [](std::span<const double> x) {
    return x[0] < 0.0 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 1.0) * (x[0] - 1.0);
  };
  const SimplexResult r = nelder_mead(f, {0.2}, {});
  CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
}

TEST_CASE("counter-based streams are deterministic and keyed") {
  CounterRng a(derive_seed(5, 1, 2)), b(derive_seed(5, 1, 2)), c(derive_seed(5, 2, 1));
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs = differs || x != c.normal();
  }
  CHECK(differs);

  std::set<std::uint64_t> keys;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t t = 0; t < 50; ++t)
      for (std::uint64_t r = 0; r < 8; ++r) keys.insert(derive_seed(s, t, r));
  CHECK(keys.size() == 4u * 50u * 8u);

  CounterRng u(9);
  double mean = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = u.normal();
    mean += z;
    sq += z * z;
  }
  CHECK(std::abs(mean / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.01);
}
