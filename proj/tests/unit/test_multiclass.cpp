#include <doctest.h>

#include "digitsvm/errors.hpp"
#include "digitsvm/multiclass.hpp"
#include "test_support.hpp"

using namespace digitsvm;
using namespace digitsvm::testing;

TEST_CASE("separated clusters are learned and recalled") {
  const Dataset train = gaussian_clusters(20, 0.08, 41);
  const Dataset test = gaussian_clusters(10, 0.08, 41);
  const OvrModel m = ovr_train(train, KernelSpec::rbf(1.0), TrainParams{});
  CHECK(m.models.size() == 10);
  CHECK(m.dimension == 18);
  std::size_t correct = 0;
  for (const auto& s : test.samples) correct += ovr_predict(m, s.features).label == s.label;
  CHECK(correct == test.size());
}

TEST_CASE("one-vs-rest relabelling") {
  const std::vector<int> labels{0, 3, 3, 9};
  CHECK(one_vs_rest_labels(labels, 3) == std::vector<int>{-1, 1, 1, -1});
  CHECK(missing_classes(labels) == std::vector<int>{1, 2, 4, 5, 6, 7, 8});
}

TEST_CASE("a missing digit is named") {
  Dataset d = gaussian_clusters(3, 0.1, 42);
  std::erase_if(d.samples, [](const Sample& s) { return s.label == 7; });
  try {
    ovr_train(d, KernelSpec::rbf(1.0), TrainParams{});
    FAIL("expected MissingClassError");
  } catch (const MissingClassError& e) {
    CHECK(e.classes() == std::vector<int>{7});
    CHECK(std::string(e.what()).find('7') != std::string::npos);
  }
}

TEST_CASE("argmax ties go to the lowest digit") {
  ScoreVector s{};
  s.fill(-1.0);
  s[4] = 0.5;
  s[8] = 0.5;
  CHECK(argmax_label(s) == 4);
  s.fill(0.0);
  CHECK(argmax_label(s) == 0);
}

TEST_CASE("batch prediction equals per-sample prediction") {
  const Dataset train = gaussian_clusters(8, 0.4, 43);
  const Dataset probe = gaussian_clusters(6, 0.6, 44);
  const OvrModel m = ovr_train(train, KernelSpec::rbf(0.5), TrainParams{});
  const auto batch = predict_batch(m, probe.features());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const Prediction p = ovr_predict(m, probe.samples[i].features);
    CHECK(batch[i].label == p.label);
    CHECK(batch[i].scores == p.scores);
  }
  CHECK_THROWS_AS(ovr_predict(m, FeatureVector(4, 0.0)), DimensionMismatch);
}

TEST_CASE("support vector counts") {
  const Dataset train = gaussian_clusters(8, 0.5, 45);
  const OvrModel m = ovr_train(train, KernelSpec::rbf(0.5), TrainParams{});
  std::size_t total = 0;
  for (const auto& b : m.models) total += b.support_vectors.size();
  CHECK(m.support_vector_total() == total);
  CHECK(m.support_vector_unique() <= train.size());
  CHECK(m.support_vector_unique() <= total);
  CHECK(m.support_vector_unique() > 0);
}
