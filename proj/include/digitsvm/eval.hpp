#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "digitsvm/kernel.hpp"
#include "digitsvm/optdigits_io.hpp"
#include "digitsvm/slt.hpp"
#include "digitsvm/smo.hpp"

namespace digitsvm {

struct OvrModel;

// Rows are the true class, columns the prediction.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t total() const;
  std::size_t trace() const;
  std::size_t row_sum(int truth) const;
};

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths);

// trace / total; throws on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

// Diagonal over row sum; nullopt for classes with no samples.
std::array<std::optional<double>, kNumClasses> per_class_rates(const ConfusionMatrix& cm);

struct GridSpec {
  std::vector<double> c_values;
  std::vector<double> gamma_values;  // ignored for the linear kernel
  int folds = 5;
  std::uint64_t fold_seed = 1;

  // C in 2^-1..2^7 and gamma in 2^-9..2^1, doubling steps.
  static GridSpec default_grid();
  void validate(std::size_t dataset_size) const;
};

// Folds drawn by a seeded shuffle within each class, dealt round robin. Every
// fold's count of any class differs from the others by at most one.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int folds,
                                                       std::uint64_t seed);

struct GridCell {
  double c = 0.0;
  double gamma = 0.0;
  bool valid = false;
  double accuracy = 0.0;  // pooled over folds
  std::vector<double> fold_accuracies;
};

struct GridResult {
  double best_c = 0.0;
  double best_gamma = 0.0;
  double cv_accuracy = 0.0;
  std::vector<GridCell> table;  // gamma-major, then C, in grid order
  std::vector<std::string> warnings;
};

// k-fold cross-validated one-vs-rest accuracy for every (C, gamma) cell,
// cells evaluated concurrently. Best cell: highest accuracy, then smaller C,
// then smaller gamma. Cells whose folds fail (missing class, non-convergence)
// are marked invalid and reported in warnings; throws if no cell is valid.
GridResult grid_search(const Dataset& data, KernelKind kind, const GridSpec& grid,
                       const TrainParams& params);

struct EvaluationReport {
  FeatureKind feature_kind = FeatureKind::block64;
  KernelSpec kernel;
  double c = 0.0;
  std::size_t samples = 0;
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  std::array<std::optional<double>, kNumClasses> per_class{};
  std::size_t support_vectors_total = 0;
  std::size_t support_vectors_unique = 0;
  std::array<std::size_t, kNumClasses> support_vectors_per_class{};
  BoundInputs bound_inputs;
  RiskReport risk;
  double wall_time_seconds = 0.0;
};

EvaluationReport evaluate(const OvrModel& model, const Dataset& data, double eta = 0.05);

std::string report_to_json(const EvaluationReport& report);
std::string grid_to_json(const GridResult& result);

}  // namespace digitsvm
