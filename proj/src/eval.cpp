#include "digitsvm/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "detail.hpp"
#include "digitsvm/multiclass.hpp"

namespace digitsvm {

namespace {

// Unbiased draw in [0, n) with a portable result for a given engine state.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = bounded(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

nlohmann::json rates_json(const std::array<std::optional<double>, kNumClasses>& rates) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rates) arr.push_back(r ? nlohmann::json(*r) : nlohmann::json(nullptr));
  return arr;
}

}  // namespace

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (std::size_t v : row) n += v;
  }
  return n;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t n = 0;
  for (int k = 0; k < kNumClasses; ++k) n += counts[k][k];
  return n;
}

std::size_t ConfusionMatrix::row_sum(int truth) const {
  std::size_t n = 0;
  for (std::size_t v : counts[truth]) n += v;
  return n;
}

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> truths) {
  if (predictions.size() != truths.size()) {
    throw std::invalid_argument("prediction and truth counts differ");
  }
  if (predictions.empty()) throw std::invalid_argument("confusion matrix of an empty sample");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const int t = truths[i], p = predictions[i];
    if (t < 0 || t >= kNumClasses || p < 0 || p >= kNumClasses) {
      throw std::invalid_argument("label outside 0-9 at position " + std::to_string(i));
    }
    ++cm.counts[t][p];
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw std::invalid_argument("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

std::array<std::optional<double>, kNumClasses> per_class_rates(const ConfusionMatrix& cm) {
  std::array<std::optional<double>, kNumClasses> rates{};
  for (int k = 0; k < kNumClasses; ++k) {
    const std::size_t n = cm.row_sum(k);
    if (n > 0) rates[k] = static_cast<double>(cm.counts[k][k]) / static_cast<double>(n);
  }
  return rates;
}

GridSpec GridSpec::default_grid() {
  GridSpec g;
  for (int e = -1; e <= 7; ++e) g.c_values.push_back(std::ldexp(1.0, e));
  for (int e = -9; e <= 1; ++e) g.gamma_values.push_back(std::ldexp(1.0, e));
  return g;
}

void GridSpec::validate(std::size_t dataset_size) const {
  if (c_values.empty()) throw std::invalid_argument("grid needs at least one C value");
  for (double c : c_values) {
    if (!(c > 0.0)) throw std::invalid_argument("grid C values must be positive");
  }
  for (double g : gamma_values) {
    if (!(g > 0.0)) throw std::invalid_argument("grid gamma values must be positive");
  }
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (static_cast<std::size_t>(folds) > dataset_size) {
    throw std::invalid_argument("more folds than samples");
  }
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int folds,
                                                       std::uint64_t seed) {
  if (folds < 1) throw std::invalid_argument("folds must be positive");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t next = 0;
  for (auto& [label, members] : by_class) {
    shuffle(members, rng);
    for (std::size_t idx : members) {
      out[next].push_back(idx);
      next = (next + 1) % static_cast<std::size_t>(folds);
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

namespace detail {

FoldPlan plan_folds(std::span<const int> labels, const GridSpec& grid) {
  FoldPlan plan;
  plan.folds = stratified_folds(labels, grid.folds, grid.fold_seed);
  for (const auto& fold : plan.folds) {
    std::vector<bool> in_fold(labels.size(), false);
    for (std::size_t i : fold) in_fold[i] = true;
    std::vector<int> train_labels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!in_fold[i]) train_labels.push_back(labels[i]);
    }
    plan.fold_ok.push_back(missing_classes(train_labels).empty());
  }
  return plan;
}

FoldScore evaluate_fold(const GramMatrix& gram, std::span<const int> labels,
                        const std::vector<std::size_t>& validation, double c,
                        const TrainParams& params) {
  FoldScore score;
  std::vector<bool> held_out(labels.size(), false);
  for (std::size_t i : validation) held_out[i] = true;
  std::vector<std::size_t> train;
  std::vector<int> train_labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!held_out[i]) {
      train.push_back(i);
      train_labels.push_back(labels[i]);
    }
  }

  const SubsetKernelRows rows(gram, train);
  std::vector<ScoreVector> scores(validation.size());
  for (int k = 0; k < kNumClasses; ++k) {
    const auto y = one_vs_rest_labels(train_labels, k);
    const DualSolution dual = solve_dual(rows, y, c, params.tol, params.iteration_budget(train.size()));
    if (!dual.converged) {
      score.error = "class " + std::to_string(k) + " did not converge";
      return score;
    }
    for (std::size_t v = 0; v < validation.size(); ++v) {
      double f = dual.bias;
      const double* krow = gram.row(validation[v]);
      for (std::size_t s = 0; s < train.size(); ++s) {
        if (dual.alphas[s] > 0.0) f += dual.alphas[s] * y[s] * krow[train[s]];
      }
      scores[v][k] = f;
    }
  }
  for (std::size_t v = 0; v < validation.size(); ++v) {
    if (argmax_label(scores[v]) == labels[validation[v]]) ++score.correct;
  }
  score.total = validation.size();
  score.ok = true;
  return score;
}

std::vector<double> grid_gammas(KernelKind kind, const GridSpec& grid) {
  if (kind == KernelKind::linear) return {0.0};
  if (grid.gamma_values.empty()) throw std::invalid_argument("rbf grid needs gamma values");
  return grid.gamma_values;
}

GridResult finish_grid(KernelKind kind, const GridSpec& grid, const std::vector<double>& gammas,
                       const std::vector<FoldScore>& scores, const FoldPlan& plan) {
  GridResult result;
  const std::size_t nc = grid.c_values.size();
  const auto nf = static_cast<std::size_t>(grid.folds);
  for (std::size_t f = 0; f < nf; ++f) {
    if (!plan.fold_ok[f]) {
      result.warnings.push_back("fold " + std::to_string(f) +
                                ": training part is missing a class; affected cells are invalid");
    }
  }

  const GridCell* best = nullptr;
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    for (std::size_t ci = 0; ci < nc; ++ci) {
      GridCell cell;
      cell.c = grid.c_values[ci];
      cell.gamma = gammas[g];
      cell.valid = true;
      std::size_t correct = 0, total = 0;
      for (std::size_t f = 0; f < nf; ++f) {
        const FoldScore& s = scores[(g * nc + ci) * nf + f];
        if (!s.ok) {
          cell.valid = false;
          if (!s.error.empty()) {
            result.warnings.push_back("cell C=" + std::to_string(cell.c) + " gamma=" +
                                      std::to_string(cell.gamma) + " fold " + std::to_string(f) +
                                      ": " + s.error);
          }
          continue;
        }
        correct += s.correct;
        total += s.total;
        cell.fold_accuracies.push_back(static_cast<double>(s.correct) / static_cast<double>(s.total));
      }
      if (cell.valid) cell.accuracy = static_cast<double>(correct) / static_cast<double>(total);
      result.table.push_back(cell);
    }
  }
  for (const auto& cell : result.table) {
    if (!cell.valid) continue;
    if (!best || cell.accuracy > best->accuracy ||
        (cell.accuracy == best->accuracy &&
         (cell.c < best->c || (cell.c == best->c && cell.gamma < best->gamma)))) {
      best = &cell;
    }
  }
  if (!best) throw std::runtime_error("grid search: no valid cell");
  result.best_c = best->c;
  result.best_gamma = kind == KernelKind::linear ? 0.0 : best->gamma;
  result.cv_accuracy = best->accuracy;
  return result;
}

}  // namespace detail

GridResult grid_search(const Dataset& data, KernelKind kind, const GridSpec& grid,
                       const TrainParams& params) {
  data.validate();
  params.validate();
  grid.validate(data.size());
  if (data.size() > kDenseGramLimit) {
    throw std::length_error("grid search holds a dense kernel matrix; dataset exceeds " +
                            std::to_string(kDenseGramLimit) + " samples");
  }
  const auto samples = data.features();
  const auto labels = data.labels();
  const auto gammas = detail::grid_gammas(kind, grid);
  const auto plan = detail::plan_folds(labels, grid);

  const std::size_t nc = grid.c_values.size();
  const auto nf = static_cast<std::size_t>(grid.folds);
  std::vector<detail::FoldScore> scores(gammas.size() * nc * nf);

  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const KernelSpec spec = kind == KernelKind::linear ? KernelSpec::linear() : KernelSpec::rbf(gammas[g]);
    const GramMatrix gram = gram_matrix(samples, spec);
    const auto tasks = static_cast<std::ptrdiff_t>(nc * nf);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < tasks; ++t) {
      const std::size_t ci = static_cast<std::size_t>(t) / nf;
      const std::size_t f = static_cast<std::size_t>(t) % nf;
      if (!plan.fold_ok[f]) continue;
      scores[(g * nc + ci) * nf + f] =
          detail::evaluate_fold(gram, labels, plan.folds[f], grid.c_values[ci], params);
    }
  }
  return detail::finish_grid(kind, grid, gammas, scores, plan);
}

EvaluationReport evaluate(const OvrModel& model, const Dataset& data, double eta) {
  data.validate();
  if (data.kind != model.kind) {
    throw std::invalid_argument("feature kind mismatch: model uses " +
                                std::string(to_string(model.kind)) + ", data is " +
                                std::string(to_string(data.kind)));
  }
  const auto start = std::chrono::steady_clock::now();
  const auto predictions = predict_batch(model, data.features());
  const auto elapsed = std::chrono::steady_clock::now() - start;

  std::vector<int> predicted(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) predicted[i] = predictions[i].label;
  const auto truths = data.labels();

  EvaluationReport r;
  r.feature_kind = model.kind;
  r.kernel = model.kernel;
  r.c = model.params.c;
  r.samples = data.size();
  r.confusion = confusion(predicted, truths);
  r.accuracy = accuracy(r.confusion);
  r.per_class = per_class_rates(r.confusion);
  r.support_vectors_total = model.support_vector_total();
  r.support_vectors_unique = model.support_vector_unique();
  for (int k = 0; k < kNumClasses; ++k) {
    r.support_vectors_per_class[k] = model.models[k].support_vectors.size();
  }
  r.bound_inputs = {vc_dim_linear(static_cast<long long>(model.dimension)),
                    static_cast<long long>(data.size()), eta};
  r.risk = risk_bound(empirical_risk(predicted, truths), r.bound_inputs);
  r.wall_time_seconds = std::chrono::duration<double>(elapsed).count();
  return r;
}

std::string report_to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["feature_kind"] = std::string(to_string(r.feature_kind));
  j["kernel"] = {{"kind", std::string(to_string(r.kernel.kind))}, {"gamma", r.kernel.gamma}};
  j["c"] = r.c;
  j["samples"] = r.samples;
  j["accuracy"] = r.accuracy;
  j["accuracy_percent"] = std::round(r.accuracy * 10000.0) / 100.0;
  auto cm = nlohmann::json::array();
  for (const auto& row : r.confusion.counts) cm.push_back(row);
  j["confusion"] = cm;
  j["per_class_rates"] = rates_json(r.per_class);
  j["support_vectors"] = {{"total", r.support_vectors_total},
                          {"unique", r.support_vectors_unique},
                          {"per_class", r.support_vectors_per_class}};
  j["risk"] = {{"r_emp", r.risk.r_emp},
               {"phi", r.risk.phi},
               {"bound", r.risk.bound},
               {"clamped", r.risk.clamped},
               {"h", r.bound_inputs.h},
               {"l", r.bound_inputs.l},
               {"eta", r.bound_inputs.eta}};
  j["notes"] = nlohmann::ordered_json::array({"per-class rates cover all ten digits, including 0"});
  j["wall_time_seconds"] = r.wall_time_seconds;
  return j.dump(2) + "\n";
}

std::string grid_to_json(const GridResult& result) {
  nlohmann::ordered_json j;
  j["best"] = {{"c", result.best_c}, {"gamma", result.best_gamma}, {"cv_accuracy", result.cv_accuracy}};
  auto table = nlohmann::ordered_json::array();
  for (const auto& cell : result.table) {
    nlohmann::ordered_json row;
    row["c"] = cell.c;
    row["gamma"] = cell.gamma;
    row["valid"] = cell.valid;
    row["accuracy"] = cell.valid ? nlohmann::ordered_json(cell.accuracy) : nlohmann::ordered_json(nullptr);
    row["fold_accuracies"] = cell.fold_accuracies;
    table.push_back(row);
  }
  j["table"] = table;
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

}  // namespace digitsvm
