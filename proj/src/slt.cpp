#include "digitsvm/slt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace digitsvm {

namespace {

double bound_log(double v) { return kNaturalLogInBound ? std::log(v) : std::log2(v); }

}  // namespace

void BoundInputs::validate() const {
  if (h < 1) throw std::invalid_argument("VC dimension h must be >= 1");
  if (l < 1) throw std::invalid_argument("sample size l must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
}

int zero_one_loss(int y, int y_hat) { return y == y_hat ? 0 : 1; }

double empirical_risk(std::span<const int> predictions, std::span<const int> truths) {
  if (predictions.size() != truths.size()) {
    throw std::invalid_argument("prediction and truth counts differ");
  }
  if (predictions.empty()) throw std::invalid_argument("empirical risk of an empty sample");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) errors += zero_one_loss(truths[i], predictions[i]);
  return static_cast<double>(errors) / static_cast<double>(predictions.size());
}

Confidence vc_confidence_detailed(const BoundInputs& in) {
  in.validate();
  const double h = static_cast<double>(in.h);
  const double l = static_cast<double>(in.l);
  const double radicand = (h * (bound_log(2.0 * l / h) + 1.0) - bound_log(in.eta / 4.0)) / l;
  if (radicand < 0.0) return {0.0, true};
  return {std::sqrt(radicand), false};
}

double vc_confidence(const BoundInputs& in) { return vc_confidence_detailed(in).phi; }

RiskReport risk_bound(double r_emp, const BoundInputs& in) {
  if (!(r_emp >= 0.0 && r_emp <= 1.0)) throw std::invalid_argument("r_emp must lie in [0, 1]");
  const Confidence conf = vc_confidence_detailed(in);
  return {r_emp, conf.phi, r_emp + conf.phi, conf.clamped};
}

long long vc_dim_linear(long long dimension) {
  if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  return dimension + 1;
}

std::size_t srm_select(std::span<const SrmCandidate> candidates, long long l, double eta) {
  if (candidates.empty()) throw std::invalid_argument("srm_select needs at least one candidate");
  std::size_t best = 0;
  double best_bound = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& cand = candidates[i];
    const double b = risk_bound(cand.r_emp, {cand.h, l, eta}).bound;
    if (i == 0 || b < best_bound || (b == best_bound && cand.h < candidates[best].h)) {
      best = i;
      best_bound = b;
    }
  }
  return best;
}

}  // namespace digitsvm
