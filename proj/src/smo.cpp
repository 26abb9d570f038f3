#include "digitsvm/smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "digitsvm/errors.hpp"

namespace digitsvm {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for non-positive-definite pairs

void check_labels(std::span<const int> labels) {
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1) {
      pos = true;
    } else if (y == -1) {
      neg = true;
    } else {
      throw std::invalid_argument("binary labels must be +1 or -1, got " + std::to_string(y));
    }
  }
  if (!pos || !neg) throw std::invalid_argument("training data needs both classes (+1 and -1)");
}

}  // namespace

void TrainParams::validate() const {
  if (!(c > 0.0 && std::isfinite(c))) throw std::invalid_argument("C must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_passes == 0) throw std::invalid_argument("max_passes must be positive");
}

std::size_t TrainParams::iteration_budget(std::size_t l) const {
  return max_passes * std::max<std::size_t>(l, 10000);
}

DualSolution solve_dual(const KernelRows& kernel, std::span<const int> labels, double c, double tol,
                        std::size_t max_iterations) {
  const std::size_t n = kernel.size();
  if (labels.size() != n) throw DimensionMismatch(n, labels.size());

  DualSolution sol;
  std::vector<double>& alpha = sol.alphas;
  alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  std::vector<double> row_i(n), row_j(n);
  const auto y = [&](std::size_t t) { return static_cast<double>(labels[t]); };

  double m_up = 0.0, m_low = 0.0;
  while (true) {
    std::ptrdiff_t i = -1, j = -1;
    m_up = -std::numeric_limits<double>::infinity();
    m_low = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y(t) * grad[t];
      const bool up = labels[t] == 1 ? alpha[t] < c : alpha[t] > 0.0;
      const bool low = labels[t] == 1 ? alpha[t] > 0.0 : alpha[t] < c;
      if (up && v > m_up) {
        m_up = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (low && v < m_low) {
        m_low = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0 || j < 0) {
      sol.violation = 0.0;
      sol.converged = true;
      break;
    }
    sol.violation = m_up - m_low;
    if (sol.violation <= tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iterations) break;
    ++sol.iterations;

    const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
    kernel.fill_row(ui, row_i);
    kernel.fill_row(uj, row_j);
    const double kii = row_i[ui], kjj = row_j[uj], kij = row_i[uj];
    const double old_ai = alpha[ui], old_aj = alpha[uj];
    double& ai = alpha[ui];
    double& aj = alpha[uj];

    if (labels[ui] != labels[uj]) {
      double quad = kii + kjj - 2.0 * kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[ui] - grad[uj]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = kii + kjj - 2.0 * kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[ui] - grad[uj]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }

    const double di = (ai - old_ai) * y(ui);
    const double dj = (aj - old_aj) * y(uj);
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y(t) * (row_i[t] * di + row_j[t] * dj);
    }
  }

  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0 && alpha[t] < c) {
      free_sum += -y(t) * grad[t];
      ++free_count;
    }
  }
  sol.bias = free_count ? free_sum / static_cast<double>(free_count) : 0.5 * (m_up + m_low);
  if (!std::isfinite(sol.bias)) sol.bias = 0.0;

  double w = 0.0;
  for (std::size_t t = 0; t < n; ++t) w += alpha[t] * (1.0 - grad[t]);
  sol.objective = 0.5 * w;
  return sol;
}

BinaryModel model_from_solution(const std::vector<FeatureVector>& samples,
                                std::span<const int> labels, const KernelSpec& spec,
                                const DualSolution& dual) {
  BinaryModel model;
  model.kernel = spec;
  model.bias = dual.bias;
  for (std::size_t t = 0; t < samples.size(); ++t) {
    if (dual.alphas[t] > 0.0) {
      model.support_vectors.push_back(samples[t]);
      model.coeffs.push_back(dual.alphas[t] * labels[t]);
    }
  }
  return model;
}

TrainResult smo_train_detailed(const std::vector<FeatureVector>& samples,
                               std::span<const int> labels, const KernelSpec& spec,
                               const TrainParams& params) {
  spec.validate();
  params.validate();
  if (samples.empty()) throw std::invalid_argument("no training samples");
  if (samples.size() != labels.size()) throw DimensionMismatch(samples.size(), labels.size());
  check_uniform_dimension(samples);
  check_labels(labels);

  const auto rows = make_kernel_rows(samples, spec);
  TrainResult result;
  result.dual = solve_dual(*rows, labels, params.c, params.tol,
                           params.iteration_budget(samples.size()));
  result.model = model_from_solution(samples, labels, spec, result.dual);
  if (!result.dual.converged) {
    std::ostringstream msg;
    msg << "SMO did not converge after " << result.dual.iterations
        << " pair updates (KKT violation " << result.dual.violation << " > tol " << params.tol
        << ")";
    throw NonConvergenceError(msg.str(), std::move(result));
  }
  return result;
}

BinaryModel smo_train(const std::vector<FeatureVector>& samples, std::span<const int> labels,
                      const KernelSpec& spec, const TrainParams& params) {
  return smo_train_detailed(samples, labels, spec, params).model;
}

double decision_value(const BinaryModel& model, std::span<const double> x) {
  const std::size_t dim = model.dimension();
  if (dim != 0 && x.size() != dim) throw DimensionMismatch(dim, x.size());
  double f = model.bias;
  for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
    f += model.coeffs[s] *
         kernel_eval_unchecked(model.kernel, model.support_vectors[s].data(), x.data(), x.size());
  }
  return f;
}

int sign_label(double decision) { return decision >= 0.0 ? 1 : -1; }

int predict_binary(const BinaryModel& model, std::span<const double> x) {
  return sign_label(decision_value(model, x));
}

FeatureVector linear_weights(const BinaryModel& model) {
  if (model.kernel.kind != KernelKind::linear) {
    throw std::invalid_argument("weight vector is only explicit for the linear kernel");
  }
  FeatureVector w(model.dimension(), 0.0);
  for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += model.coeffs[s] * model.support_vectors[s][k];
  }
  return w;
}

double dual_objective(const std::vector<FeatureVector>& samples, std::span<const int> labels,
                      const KernelSpec& spec, std::span<const double> alphas) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    linear += alphas[i];
    for (std::size_t j = 0; j < samples.size(); ++j) {
      quad += alphas[i] * alphas[j] * labels[i] * labels[j] * kernel_eval(spec, samples[i], samples[j]);
    }
  }
  return linear - 0.5 * quad;
}

}  // namespace digitsvm
