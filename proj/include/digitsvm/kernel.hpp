#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "digitsvm/optdigits_io.hpp"

namespace digitsvm {

enum class KernelKind { linear, rbf };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

// gamma plays the role of 1 / (2 sigma^2) in exp(-||x - z||^2 / (2 sigma^2)).
struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  double gamma = 0.03125;

  static KernelSpec linear() { return {KernelKind::linear, 0.0}; }
  static KernelSpec rbf(double gamma) { return {KernelKind::rbf, gamma}; }

  void validate() const;
  bool operator==(const KernelSpec&) const = default;
};

// RBF exponents below this are clamped before exp().
inline constexpr double kRbfExponentFloor = -700.0;

// Throws DimensionMismatch when sizes differ.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z);

// Same value without the size check; x and z must have equal length.
double kernel_eval_unchecked(const KernelSpec& spec, const double* x, const double* z,
                             std::size_t dim);

// Row access to a kernel matrix over a fixed training set. Implementations are
// immutable after construction and safe to read from several threads.
class KernelRows {
 public:
  virtual ~KernelRows() = default;
  virtual std::size_t size() const = 0;
  virtual double diagonal(std::size_t i) const = 0;
  // out.size() == size(); out[j] = K(x_i, x_j).
  virtual void fill_row(std::size_t i, std::span<double> out) const = 0;
};

// Dense symmetric Gram matrix.
class GramMatrix final : public KernelRows {
 public:
  GramMatrix() = default;
  GramMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const override { return n_; }
  double diagonal(std::size_t i) const override { return values_[i * n_ + i]; }
  void fill_row(std::size_t i, std::span<double> out) const override;

  double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  const double* row(std::size_t i) const { return values_.data() + i * n_; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Rows of a principal submatrix selected by index.
class SubsetKernelRows final : public KernelRows {
 public:
  SubsetKernelRows(const GramMatrix& full, std::vector<std::size_t> index);

  std::size_t size() const override { return index_.size(); }
  double diagonal(std::size_t i) const override { return full_.diagonal(index_[i]); }
  void fill_row(std::size_t i, std::span<double> out) const override;

 private:
  const GramMatrix& full_;
  std::vector<std::size_t> index_;
};

// Computes rows on demand; used when a dense matrix would not fit.
class OnTheFlyKernelRows final : public KernelRows {
 public:
  OnTheFlyKernelRows(const std::vector<FeatureVector>& samples, KernelSpec spec);

  std::size_t size() const override { return samples_.size(); }
  double diagonal(std::size_t i) const override { return diag_[i]; }
  void fill_row(std::size_t i, std::span<double> out) const override;

 private:
  const std::vector<FeatureVector>& samples_;
  KernelSpec spec_;
  std::vector<double> diag_;
};

// Largest training set that gets a dense Gram matrix (about 512 MiB of doubles).
inline constexpr std::size_t kDenseGramLimit = 8192;

// OpenMP-parallel over rows. Entries are bit-identical to kernel_eval.
GramMatrix gram_matrix(const std::vector<FeatureVector>& samples, const KernelSpec& spec);

// Dense when samples.size() <= kDenseGramLimit, otherwise on the fly.
// The returned object may reference samples.
std::unique_ptr<KernelRows> make_kernel_rows(const std::vector<FeatureVector>& samples,
                                             const KernelSpec& spec);

void check_uniform_dimension(const std::vector<FeatureVector>& samples);

}  // namespace digitsvm
