#pragma once

// Per-item routines shared by the OpenMP kernels and their serial references.

#include <exception>
#include <span>
#include <vector>

#include "digitsvm/eval.hpp"
#include "digitsvm/multiclass.hpp"

namespace digitsvm::detail {

struct OvrInputs {
  std::vector<FeatureVector> samples;
  std::vector<int> labels;
};

// Validates the dataset and checks every digit is present.
OvrInputs prepare_ovr(const Dataset& data, const KernelSpec& spec, const TrainParams& params);

BinaryModel train_class(const OvrInputs& in, int digit, const KernelRows& rows,
                        const KernelSpec& spec, const TrainParams& params);

OvrModel assemble(std::vector<BinaryModel> models, const Dataset& data, const KernelSpec& spec,
                  const TrainParams& params, const FeatureScaling& scaling);

// Rethrows the lowest-index captured exception, if any.
void rethrow_first(const std::vector<std::exception_ptr>& errors);

// Grid search plumbing: one (C, fold) task within a fixed gamma.
struct FoldPlan {
  std::vector<std::vector<std::size_t>> folds;
  std::vector<bool> fold_ok;  // training part contains every digit
};

FoldPlan plan_folds(std::span<const int> labels, const GridSpec& grid);

struct FoldScore {
  std::size_t correct = 0;
  std::size_t total = 0;
  bool ok = false;
  std::string error;
};

FoldScore evaluate_fold(const GramMatrix& gram, std::span<const int> labels,
                        const std::vector<std::size_t>& validation, double c,
                        const TrainParams& params);

std::vector<double> grid_gammas(KernelKind kind, const GridSpec& grid);

GridResult finish_grid(KernelKind kind, const GridSpec& grid,
                       const std::vector<double>& gammas,
                       const std::vector<FoldScore>& scores, const FoldPlan& plan);

}  // namespace digitsvm::detail
