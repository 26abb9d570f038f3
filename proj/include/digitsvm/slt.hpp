#pragma once

#include <span>
#include <utility>
#include <vector>

namespace digitsvm {

// Natural logarithm throughout; set to false for base-2 logarithms in the
// confidence term.
inline constexpr bool kNaturalLogInBound = true;

struct BoundInputs {
  long long h = 1;   // VC dimension
  long long l = 1;   // training-set size
  double eta = 0.05; // bound holds with probability at least 1 - eta

  void validate() const;
};

struct RiskReport {
  double r_emp = 0.0;
  double phi = 0.0;
  double bound = 0.0;
  bool clamped = false;  // confidence radicand was negative and clamped to 0
};

int zero_one_loss(int y, int y_hat);

// Mean 0/1 loss. Throws on empty or mismatched input.
double empirical_risk(std::span<const int> predictions, std::span<const int> truths);

struct Confidence {
  double phi = 0.0;
  bool clamped = false;
};

// sqrt((h (log(2l/h) + 1) - log(eta/4)) / l)
Confidence vc_confidence_detailed(const BoundInputs& in);
double vc_confidence(const BoundInputs& in);

// r_emp + phi; r_emp must lie in [0, 1].
RiskReport risk_bound(double r_emp, const BoundInputs& in);

// Linear separators in R^n.
long long vc_dim_linear(long long dimension);

struct SrmCandidate {
  double r_emp = 0.0;
  long long h = 1;
};

// Index minimizing r_emp + phi(h, l, eta); ties go to smaller h, then lower index.
std::size_t srm_select(std::span<const SrmCandidate> candidates, long long l, double eta);

}  // namespace digitsvm
