#pragma once

#include <array>
#include <span>
#include <vector>

#include "digitsvm/optdigits_io.hpp"
#include "digitsvm/smo.hpp"

namespace digitsvm {

// How raw features were conditioned before training. Applied identically at
// serve time.
struct FeatureScaling {
  double divisor = 1.0;       // block64: 16 maps counts onto [0, 1]
  bool log_compress = false;  // moment18: sign(v) log(1 + |v|)

  bool operator==(const FeatureScaling&) const = default;
};

using ScoreVector = std::array<double, kNumClasses>;

// One binary machine per digit, class k against the rest.
struct OvrModel {
  std::vector<BinaryModel> models;  // index = digit
  FeatureKind kind = FeatureKind::block64;
  FeatureScaling scaling;
  KernelSpec kernel;
  TrainParams params;
  std::size_t dimension = 0;

  std::size_t support_vector_total() const;
  // Distinct training points that are a support vector of at least one class.
  std::size_t support_vector_unique() const;
};

struct Prediction {
  int label = 0;
  ScoreVector scores{};
};

// +1 for samples of `positive`, -1 otherwise.
std::vector<int> one_vs_rest_labels(std::span<const int> labels, int positive);

// Classes 0..9 absent from the labels, ascending.
std::vector<int> missing_classes(std::span<const int> labels);

// Trains the ten machines concurrently over one shared kernel matrix. Throws
// MissingClassError when a digit has no samples.
OvrModel ovr_train(const Dataset& data, const KernelSpec& spec, const TrainParams& params,
                   const FeatureScaling& scaling = {});

ScoreVector ovr_scores(const OvrModel& model, std::span<const double> x);

// Lowest index wins ties.
int argmax_label(const ScoreVector& scores);

Prediction ovr_predict(const OvrModel& model, std::span<const double> x);

// OpenMP-parallel over samples.
std::vector<Prediction> predict_batch(const OvrModel& model, const std::vector<FeatureVector>& xs);

}  // namespace digitsvm
