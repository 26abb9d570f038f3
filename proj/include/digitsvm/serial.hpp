#pragma once

// Single-threaded reference versions of the OpenMP kernels. They share the
// per-item routines with the parallel code and differ only in the outer loop,
// so results must match bit for bit.

#include <vector>

#include "digitsvm/eval.hpp"
#include "digitsvm/features.hpp"
#include "digitsvm/kernel.hpp"
#include "digitsvm/multiclass.hpp"

namespace digitsvm::serial {

GramMatrix gram_matrix(const std::vector<FeatureVector>& samples, const KernelSpec& spec);

OvrModel ovr_train(const Dataset& data, const KernelSpec& spec, const TrainParams& params,
                   const FeatureScaling& scaling = {});

std::vector<Prediction> predict_batch(const OvrModel& model, const std::vector<FeatureVector>& xs);

GridResult grid_search(const Dataset& data, KernelKind kind, const GridSpec& grid,
                       const TrainParams& params);

std::vector<FeatureVector> moment_features_batch(const std::vector<RawBitmap>& bitmaps,
                                                 bool log_compressed);

}  // namespace digitsvm::serial
