#include "digitsvm/serial.hpp"

#include <exception>
#include <memory>
#include <stdexcept>

#include "../detail.hpp"

namespace digitsvm::serial {

GramMatrix gram_matrix(const std::vector<FeatureVector>& samples, const KernelSpec& spec) {
  spec.validate();
  check_uniform_dimension(samples);
  const std::size_t n = samples.size();
  const std::size_t dim = n ? samples.front().size() : 0;
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel_eval_unchecked(spec, samples[i].data(), samples[j].data(), dim);
      values[i * n + j] = v;
      values[j * n + i] = v;
    }
  }
  return GramMatrix(n, std::move(values));
}

OvrModel ovr_train(const Dataset& data, const KernelSpec& spec, const TrainParams& params,
                   const FeatureScaling& scaling) {
  const auto in = detail::prepare_ovr(data, spec, params);
  std::unique_ptr<KernelRows> rows;
  if (in.samples.size() <= kDenseGramLimit) {
    rows = std::make_unique<GramMatrix>(serial::gram_matrix(in.samples, spec));
  } else {
    rows = std::make_unique<OnTheFlyKernelRows>(in.samples, spec);
  }
  std::vector<BinaryModel> models(kNumClasses);
  std::vector<std::exception_ptr> errors(kNumClasses);
  for (int k = 0; k < kNumClasses; ++k) {
    try {
      models[k] = detail::train_class(in, k, *rows, spec, params);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  detail::rethrow_first(errors);
  return detail::assemble(std::move(models), data, spec, params, scaling);
}

std::vector<Prediction> predict_batch(const OvrModel& model, const std::vector<FeatureVector>& xs) {
  std::vector<Prediction> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(ovr_predict(model, x));
  return out;
}

GridResult grid_search(const Dataset& data, KernelKind kind, const GridSpec& grid,
                       const TrainParams& params) {
  data.validate();
  params.validate();
  grid.validate(data.size());
  if (data.size() > kDenseGramLimit) {
    throw std::length_error("grid search dataset exceeds the dense kernel limit");
  }
  const auto samples = data.features();
  const auto labels = data.labels();
  const auto gammas = detail::grid_gammas(kind, grid);
  const auto plan = detail::plan_folds(labels, grid);
  const std::size_t nc = grid.c_values.size();
  const auto nf = static_cast<std::size_t>(grid.folds);
  std::vector<detail::FoldScore> scores(gammas.size() * nc * nf);
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const KernelSpec spec =
        kind == KernelKind::linear ? KernelSpec::linear() : KernelSpec::rbf(gammas[g]);
    const GramMatrix gram = serial::gram_matrix(samples, spec);
    for (std::size_t ci = 0; ci < nc; ++ci) {
      for (std::size_t f = 0; f < nf; ++f) {
        if (!plan.fold_ok[f]) continue;
        scores[(g * nc + ci) * nf + f] =
            detail::evaluate_fold(gram, labels, plan.folds[f], grid.c_values[ci], params);
      }
    }
  }
  return detail::finish_grid(kind, grid, gammas, scores, plan);
}

std::vector<FeatureVector> moment_features_batch(const std::vector<RawBitmap>& bitmaps,
                                                 bool log_compressed) {
  std::vector<FeatureVector> out;
  out.reserve(bitmaps.size());
  for (const auto& b : bitmaps) {
    out.push_back(moment_feature_vector(extract_moment_features(BinaryImage::from_bitmap(b)),
                                        log_compressed));
  }
  return out;
}

}  // namespace digitsvm::serial
