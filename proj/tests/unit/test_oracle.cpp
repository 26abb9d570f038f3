#include <doctest.h>

#include <cmath>

#include "digitsvm/oracle.hpp"
#include "digitsvm/smo.hpp"
#include "test_support.hpp"

using namespace digitsvm;
using namespace digitsvm::testing;

TEST_CASE("exhaustive dual on two points by hand") {
  const std::vector<FeatureVector> x{{0.0}, {2.0}};
  const std::vector<int> y{-1, 1};
  const DualOracleResult r = brute_force_dual(x, y, KernelSpec::linear(), 10.0);
  CHECK(r.alphas[0] == doctest::Approx(0.5));
  CHECK(r.alphas[1] == doctest::Approx(0.5));
  CHECK(r.objective == doctest::Approx(0.5));
  CHECK(r.bias == doctest::Approx(-1.0));
  CHECK(r.faces_examined == 9);
  CHECK(oracle_decision(x, y, KernelSpec::linear(), r, FeatureVector{1.0}) == doctest::Approx(0.0));
}

TEST_CASE("a tight box puts both multipliers at C") {
  const std::vector<FeatureVector> x{{0.0}, {2.0}};
  const std::vector<int> y{-1, 1};
  const DualOracleResult r = brute_force_dual(x, y, KernelSpec::linear(), 0.1);
  CHECK(r.alphas[0] == doctest::Approx(0.1));
  CHECK(r.alphas[1] == doctest::Approx(0.1));
  // 0.2 - 0.5 * 0.01 * 4
  CHECK(r.objective == doctest::Approx(0.18));
}

TEST_CASE("oracle optimum dominates random feasible points") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Binary2D d = random_tiny(rng, 5);
    const KernelSpec spec = KernelSpec::rbf(1.5);
    const double c = 3.0;
    const DualOracleResult r = brute_force_dual(d.x, d.y, spec, c);
    for (int probe = 0; probe < 200; ++probe) {
      // Random feasible point: scale positives and negatives to equal mass.
      std::vector<double> a(d.x.size());
      double pos = 0.0, neg = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = u(rng);
        (d.y[i] > 0 ? pos : neg) += a[i];
      }
      const double target = std::min(pos, neg) * u(rng);
      double scale_max = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] *= target / (d.y[i] > 0 ? pos : neg);
        scale_max = std::max(scale_max, a[i]);
      }
      if (scale_max > c) continue;
      CHECK(dual_objective(d.x, d.y, spec, a) <= r.objective + 1e-12);
    }
  }
}

TEST_CASE("oracle refuses more than six points") {
  std::mt19937_64 rng(72);
  const Binary2D d = random_tiny(rng, 7);
  CHECK_THROWS_AS(brute_force_dual(d.x, d.y, KernelSpec::linear(), 1.0), std::invalid_argument);
}

TEST_CASE("hull distance between two squares") {
  const std::vector<FeatureVector> a{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const std::vector<FeatureVector> b{{3, 0.5}, {4, 0}, {4, 1}};
  const HullResult r = hull_closest_points(a, b);
  CHECK(r.separable);
  CHECK(r.distance == doctest::Approx(2.0));
  CHECK(r.point_a[0] == doctest::Approx(1.0));
  CHECK(r.point_b == FeatureVector{3, 0.5});
}

TEST_CASE("hull distance to an edge interior") {
  const std::vector<FeatureVector> a{{0, 0}, {4, 0}};
  const std::vector<FeatureVector> b{{2, 3}};
  const HullResult r = hull_closest_points(a, b);
  CHECK(r.distance == doctest::Approx(3.0));
  CHECK(r.point_a[0] == doctest::Approx(2.0));
}

TEST_CASE("overlapping hulls are not separable") {
  const std::vector<FeatureVector> cross_a{{-1, 0}, {1, 0}};
  const std::vector<FeatureVector> cross_b{{0, -1}, {0, 1}};
  CHECK_FALSE(hull_closest_points(cross_a, cross_b).separable);
  const std::vector<FeatureVector> tri{{0, 0}, {4, 0}, {0, 4}};
  const std::vector<FeatureVector> inside{{1, 1}};
  CHECK_FALSE(hull_closest_points(tri, inside).separable);
  CHECK_FALSE(hull_closest_points(inside, tri).separable);
}
