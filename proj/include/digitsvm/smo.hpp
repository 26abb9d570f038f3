#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "digitsvm/kernel.hpp"

namespace digitsvm {

struct TrainParams {
  double c = 8.0;     // box constraint
  double tol = 1e-3;  // KKT tolerance on the maximal violating pair
  // Pair-update budget, in units of max(l, 10000) updates.
  std::size_t max_passes = 10;

  void validate() const;
  std::size_t iteration_budget(std::size_t l) const;
};

// Trained two-class machine: f(x) = sum_i coeffs[i] K(sv_i, x) + bias with
// coeffs[i] = alpha_i y_i.
struct BinaryModel {
  std::vector<FeatureVector> support_vectors;
  std::vector<double> coeffs;
  double bias = 0.0;
  KernelSpec kernel;

  std::size_t dimension() const {
    return support_vectors.empty() ? 0 : support_vectors.front().size();
  }
};

// Dual solution over every training point, as produced by the solver.
struct DualSolution {
  std::vector<double> alphas;
  double bias = 0.0;
  // W(alpha) = sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
  double objective = 0.0;
  std::size_t iterations = 0;
  // m(alpha) - M(alpha) at exit; <= tol when converged.
  double violation = 0.0;
  bool converged = false;
};

struct TrainResult {
  BinaryModel model;
  DualSolution dual;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& diagnostic, TrainResult best)
      : std::runtime_error(diagnostic), best_(std::move(best)) {}

  const TrainResult& best_iterate() const noexcept { return best_; }

 private:
  TrainResult best_;
};

// SMO with maximal-violating-pair working set selection over a kernel matrix.
// labels are +1 / -1. Never throws on non-convergence; check converged.
DualSolution solve_dual(const KernelRows& kernel, std::span<const int> labels, double c, double tol,
                        std::size_t max_iterations);

// Keeps only points with alpha > 0.
BinaryModel model_from_solution(const std::vector<FeatureVector>& samples,
                                std::span<const int> labels, const KernelSpec& spec,
                                const DualSolution& dual);

// Throws std::invalid_argument on bad input (one class only, ragged samples,
// labels outside {-1,+1}) and NonConvergenceError when the budget runs out.
TrainResult smo_train_detailed(const std::vector<FeatureVector>& samples,
                               std::span<const int> labels, const KernelSpec& spec,
                               const TrainParams& params);

BinaryModel smo_train(const std::vector<FeatureVector>& samples, std::span<const int> labels,
                      const KernelSpec& spec, const TrainParams& params);

double decision_value(const BinaryModel& model, std::span<const double> x);

// Sign of the decision value; exactly 0 maps to +1.
int predict_binary(const BinaryModel& model, std::span<const double> x);
int sign_label(double decision);

// w = sum coeffs[i] sv_i; linear kernel only.
FeatureVector linear_weights(const BinaryModel& model);

// W(alpha) evaluated directly from the kernel.
double dual_objective(const std::vector<FeatureVector>& samples, std::span<const int> labels,
                      const KernelSpec& spec, std::span<const double> alphas);

}  // namespace digitsvm
