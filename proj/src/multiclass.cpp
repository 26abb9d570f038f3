#include "digitsvm/multiclass.hpp"

#include <algorithm>
#include <exception>
#include <sstream>

#include "detail.hpp"
#include "digitsvm/errors.hpp"

namespace digitsvm {

namespace detail {

OvrInputs prepare_ovr(const Dataset& data, const KernelSpec& spec, const TrainParams& params) {
  spec.validate();
  params.validate();
  data.validate();
  OvrInputs in{data.features(), data.labels()};
  if (auto missing = missing_classes(in.labels); !missing.empty()) {
    throw MissingClassError(std::move(missing));
  }
  return in;
}

BinaryModel train_class(const OvrInputs& in, int digit, const KernelRows& rows,
                        const KernelSpec& spec, const TrainParams& params) {
  const auto y = one_vs_rest_labels(in.labels, digit);
  DualSolution dual =
      solve_dual(rows, y, params.c, params.tol, params.iteration_budget(in.samples.size()));
  TrainResult result{model_from_solution(in.samples, y, spec, dual), dual};
  if (!dual.converged) {
    std::ostringstream msg;
    msg << "class " << digit << ": SMO did not converge after " << dual.iterations
        << " pair updates (KKT violation " << dual.violation << ")";
    throw NonConvergenceError(msg.str(), std::move(result));
  }
  return std::move(result.model);
}

OvrModel assemble(std::vector<BinaryModel> models, const Dataset& data, const KernelSpec& spec,
                  const TrainParams& params, const FeatureScaling& scaling) {
  OvrModel model;
  model.models = std::move(models);
  model.kind = data.kind;
  model.scaling = scaling;
  model.kernel = spec;
  model.params = params;
  model.dimension = data.dimension();
  return model;
}

void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

std::size_t OvrModel::support_vector_total() const {
  std::size_t n = 0;
  for (const auto& m : models) n += m.support_vectors.size();
  return n;
}

std::size_t OvrModel::support_vector_unique() const {
  std::vector<const FeatureVector*> all;
  for (const auto& m : models) {
    for (const auto& sv : m.support_vectors) all.push_back(&sv);
  }
  const auto less = [](const FeatureVector* a, const FeatureVector* b) { return *a < *b; };
  const auto same = [](const FeatureVector* a, const FeatureVector* b) { return *a == *b; };
  std::sort(all.begin(), all.end(), less);
  return static_cast<std::size_t>(std::unique(all.begin(), all.end(), same) - all.begin());
}

std::vector<int> one_vs_rest_labels(std::span<const int> labels, int positive) {
  std::vector<int> y(labels.size());
  std::transform(labels.begin(), labels.end(), y.begin(),
                 [positive](int l) { return l == positive ? 1 : -1; });
  return y;
}

std::vector<int> missing_classes(std::span<const int> labels) {
  std::array<bool, kNumClasses> seen{};
  for (int l : labels) {
    if (l >= 0 && l < kNumClasses) seen[l] = true;
  }
  std::vector<int> missing;
  for (int k = 0; k < kNumClasses; ++k) {
    if (!seen[k]) missing.push_back(k);
  }
  return missing;
}

OvrModel ovr_train(const Dataset& data, const KernelSpec& spec, const TrainParams& params,
                   const FeatureScaling& scaling) {
  const auto in = detail::prepare_ovr(data, spec, params);
  const auto rows = make_kernel_rows(in.samples, spec);

  std::vector<BinaryModel> models(kNumClasses);
  std::vector<std::exception_ptr> errors(kNumClasses);
#pragma omp parallel for schedule(dynamic, 1)
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

ScoreVector ovr_scores(const OvrModel& model, std::span<const double> x) {
  if (x.size() != model.dimension) throw DimensionMismatch(model.dimension, x.size());
  ScoreVector scores{};
  for (int k = 0; k < kNumClasses; ++k) scores[k] = decision_value(model.models[k], x);
  return scores;
}

int argmax_label(const ScoreVector& scores) {
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

Prediction ovr_predict(const OvrModel& model, std::span<const double> x) {
  Prediction p;
  p.scores = ovr_scores(model, x);
  p.label = argmax_label(p.scores);
  return p;
}

std::vector<Prediction> predict_batch(const OvrModel& model, const std::vector<FeatureVector>& xs) {
  for (const auto& x : xs) {
    if (x.size() != model.dimension) throw DimensionMismatch(model.dimension, x.size());
  }
  std::vector<Prediction> out(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = ovr_predict(model, xs[i]);
  return out;
}

}  // namespace digitsvm
