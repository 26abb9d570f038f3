#include <doctest.h>

#include <cmath>

#include "digitsvm/errors.hpp"
#include "digitsvm/kernel.hpp"
#include "test_support.hpp"

using namespace digitsvm;
using namespace digitsvm::testing;

TEST_CASE("kernel values by hand") {
  const FeatureVector x{1.0, 2.0}, z{3.0, -1.0};
  CHECK(kernel_eval(KernelSpec::linear(), x, z) == 1.0);
  // ||x - z||^2 = 4 + 9 = 13
  CHECK(kernel_eval(KernelSpec::rbf(0.5), x, z) == doctest::Approx(std::exp(-6.5)));
  CHECK(kernel_eval(KernelSpec::rbf(2.0), x, x) == 1.0);
  CHECK(kernel_eval(KernelSpec::rbf(1e6), x, z) == std::exp(kRbfExponentFloor));
  CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), x, FeatureVector{1.0}), DimensionMismatch);
}

TEST_CASE("kernel specs validate gamma") {
  CHECK_THROWS(KernelSpec::rbf(0.0).validate());
  CHECK_THROWS(KernelSpec::rbf(-1.0).validate());
  CHECK_NOTHROW(KernelSpec::linear().validate());
  CHECK(KernelSpec{}.gamma == 0.03125);
  CHECK(KernelSpec{}.kind == KernelKind::rbf);
  CHECK(kernel_kind_from_string("linear") == KernelKind::linear);
  CHECK_THROWS(kernel_kind_from_string("poly"));
}

TEST_CASE("gram matrix is symmetric and bit-identical to kernel_eval") {
  const Dataset d = gaussian_clusters(4, 0.3, 3);
  const auto xs = d.features();
  for (const auto& spec : {KernelSpec::linear(), KernelSpec::rbf(0.7)}) {
    const GramMatrix g = gram_matrix(xs, spec);
    REQUIRE(g.size() == xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        CHECK(g.at(i, j) == kernel_eval(spec, xs[i], xs[j]));
        CHECK(g.at(i, j) == g.at(j, i));
      }
      CHECK(g.diagonal(i) == g.at(i, i));
    }
  }
}

TEST_CASE("row providers agree") {
  const Dataset d = gaussian_clusters(3, 0.3, 4);
  const auto xs = d.features();
  const KernelSpec spec = KernelSpec::rbf(0.3);
  const GramMatrix g = gram_matrix(xs, spec);
  const OnTheFlyKernelRows fly(xs, spec);
  std::vector<double> a(xs.size()), b(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    g.fill_row(i, a);
    fly.fill_row(i, b);
    CHECK(a == b);
    CHECK(fly.diagonal(i) == g.diagonal(i));
  }
  const SubsetKernelRows sub(g, {4, 0, 7});
  std::vector<double> row(3);
  sub.fill_row(1, row);
  CHECK(row[0] == g.at(0, 4));
  CHECK(row[1] == g.at(0, 0));
  CHECK(row[2] == g.at(0, 7));
  CHECK(sub.diagonal(2) == g.at(7, 7));
  CHECK_THROWS(SubsetKernelRows(g, {100}));
  CHECK(make_kernel_rows(xs, spec)->size() == xs.size());
}

TEST_CASE("ragged samples are rejected") {
  std::vector<FeatureVector> xs{{1.0, 2.0}, {1.0}};
  CHECK_THROWS_AS(gram_matrix(xs, KernelSpec::linear()), DimensionMismatch);
}
