#include <doctest.h>

#include "digitsvm/serial.hpp"
#include "test_support.hpp"

using namespace digitsvm;
using namespace digitsvm::testing;

namespace {

Dataset scaled_subset(std::size_t per_class) {
  Dataset d = first_per_class(uci_split("optdigits.tra"), per_class);
  for (auto& s : d.samples) {
    for (double& v : s.features) v /= 16.0;
  }
  return d;
}

}  // namespace

TEST_CASE("gram matrices match bit for bit") {
  const Dataset d = scaled_subset(15);
  const auto xs = d.features();
  for (const auto& spec : {KernelSpec::rbf(0.03125), KernelSpec::linear()}) {
    const GramMatrix a = gram_matrix(xs, spec);
    const GramMatrix b = serial::gram_matrix(xs, spec);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end()));
  }
}

TEST_CASE("one-vs-rest training and prediction match bit for bit") {
  const Dataset d = scaled_subset(20);
  const OvrModel a = ovr_train(d, KernelSpec{}, TrainParams{});
  const OvrModel b = serial::ovr_train(d, KernelSpec{}, TrainParams{});
  for (int k = 0; k < 10; ++k) {
    CHECK(a.models[k].coeffs == b.models[k].coeffs);
    CHECK(a.models[k].bias == b.models[k].bias);
    CHECK(a.models[k].support_vectors == b.models[k].support_vectors);
  }
  const Dataset probe = scaled_subset(30);
  const auto pa = predict_batch(a, probe.features());
  const auto pb = serial::predict_batch(a, probe.features());
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].label == pb[i].label);
    CHECK(pa[i].scores == pb[i].scores);
  }
}

TEST_CASE("grid search matches bit for bit") {
  const Dataset d = scaled_subset(10);
  GridSpec grid;
  grid.c_values = {2.0, 8.0};
  grid.gamma_values = {0.0625, 0.25};
  grid.folds = 3;
  const GridResult a = grid_search(d, KernelKind::rbf, grid, TrainParams{});
  const GridResult b = serial::grid_search(d, KernelKind::rbf, grid, TrainParams{});
  CHECK(grid_to_json(a) == grid_to_json(b));
}
