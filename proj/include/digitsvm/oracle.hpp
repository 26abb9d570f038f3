#pragma once

// Slow exact reference solvers for tiny problems, used to check the SMO solver.

#include <span>
#include <vector>

#include "digitsvm/kernel.hpp"

namespace digitsvm {

inline constexpr std::size_t kOracleMaxPoints = 6;

struct DualOracleResult {
  std::vector<double> alphas;
  double objective = 0.0;
  double bias = 0.0;
  std::size_t faces_examined = 0;
  std::size_t faces_feasible = 0;
};

// Maximises sum(a) - 1/2 sum a_i a_j y_i y_j K_ij over 0 <= a <= C, y'a = 0 by
// visiting every assignment of each a_i to {0, C, free} (3^n faces) and solving
// the stationarity system on each face. Refuses n > kOracleMaxPoints.
DualOracleResult brute_force_dual(const std::vector<FeatureVector>& samples,
                                  std::span<const int> labels, const KernelSpec& spec, double c);

// Decision value sum_i a_i y_i K(x_i, x) + b.
double oracle_decision(const std::vector<FeatureVector>& samples, std::span<const int> labels,
                       const KernelSpec& spec, const DualOracleResult& sol,
                       std::span<const double> x);

struct HullResult {
  FeatureVector point_a;
  FeatureVector point_b;
  double distance = 0.0;
  bool separable = false;
};

// Closest points between the convex hulls of two planar point sets. Exhaustive
// over vertex/segment pairs; separability is decided by segment crossings and
// vertex-in-triangle containment.
HullResult hull_closest_points(const std::vector<FeatureVector>& class_a,
                               const std::vector<FeatureVector>& class_b);

}  // namespace digitsvm
