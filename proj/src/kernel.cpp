#include "digitsvm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "digitsvm/errors.hpp"

namespace digitsvm {

std::string_view to_string(KernelKind kind) { return kind == KernelKind::linear ? "linear" : "rbf"; }

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "rbf") return KernelKind::rbf;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (kind == KernelKind::rbf && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw std::invalid_argument("rbf gamma must be positive, got " + std::to_string(gamma));
  }
}

double kernel_eval_unchecked(const KernelSpec& spec, const double* x, const double* z,
                             std::size_t dim) {
  if (spec.kind == KernelKind::linear) {
    double dot = 0.0;
    for (std::size_t k = 0; k < dim; ++k) dot += x[k] * z[k];
    return dot;
  }
  double dist2 = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double d = x[k] - z[k];
    dist2 += d * d;
  }
  return std::exp(std::max(-spec.gamma * dist2, kRbfExponentFloor));
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size()) throw DimensionMismatch(x.size(), z.size());
  return kernel_eval_unchecked(spec, x.data(), z.data(), x.size());
}

GramMatrix::GramMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n_ * n_) throw std::invalid_argument("gram matrix size mismatch");
}

void GramMatrix::fill_row(std::size_t i, std::span<double> out) const {
  std::copy_n(values_.data() + i * n_, n_, out.begin());
}

SubsetKernelRows::SubsetKernelRows(const GramMatrix& full, std::vector<std::size_t> index)
    : full_(full), index_(std::move(index)) {
  for (std::size_t i : index_) {
    if (i >= full_.size()) throw std::out_of_range("subset index outside gram matrix");
  }
}

void SubsetKernelRows::fill_row(std::size_t i, std::span<double> out) const {
  const double* row = full_.row(index_[i]);
  for (std::size_t j = 0; j < index_.size(); ++j) out[j] = row[index_[j]];
}

OnTheFlyKernelRows::OnTheFlyKernelRows(const std::vector<FeatureVector>& samples, KernelSpec spec)
    : samples_(samples), spec_(spec), diag_(samples.size()) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    diag_[i] = kernel_eval_unchecked(spec_, samples[i].data(), samples[i].data(), samples[i].size());
  }
}

void OnTheFlyKernelRows::fill_row(std::size_t i, std::span<double> out) const {
  const auto& xi = samples_[i];
  for (std::size_t j = 0; j < samples_.size(); ++j) {
    out[j] = kernel_eval_unchecked(spec_, xi.data(), samples_[j].data(), xi.size());
  }
}

void check_uniform_dimension(const std::vector<FeatureVector>& samples) {
  if (samples.empty()) return;
  const std::size_t dim = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != dim) throw DimensionMismatch(dim, s.size());
  }
}

GramMatrix gram_matrix(const std::vector<FeatureVector>& samples, const KernelSpec& spec) {
  spec.validate();
  check_uniform_dimension(samples);
  const std::size_t n = samples.size();
  const std::size_t dim = n ? samples.front().size() : 0;
  std::vector<double> values(n * n);
  const auto rows = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel_eval_unchecked(spec, samples[i].data(), samples[j].data(), dim);
      values[i * n + j] = v;
      values[j * n + i] = v;
    }
  }
  return GramMatrix(n, std::move(values));
}

std::unique_ptr<KernelRows> make_kernel_rows(const std::vector<FeatureVector>& samples,
                                             const KernelSpec& spec) {
  if (samples.size() <= kDenseGramLimit) {
    return std::make_unique<GramMatrix>(gram_matrix(samples, spec));
  }
  spec.validate();
  check_uniform_dimension(samples);
  return std::make_unique<OnTheFlyKernelRows>(samples, spec);
}

}  // namespace digitsvm
