#include "coopsense/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "svm_internal.hpp"

namespace coopsense::svm {

double kernel_eval(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::domain_error("kernel_eval: dimension mismatch");
  return detail::kernel_unchecked(kernel, x, y);
}

std::vector<double> gram_matrix(const KernelSpec& kernel, const FeatureMatrix& x) {
  const std::size_t n = x.rows;
  std::vector<double> gram(n * n);
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j <= i; ++j) {
      const double k = detail::kernel_unchecked(kernel, x.row(i), x.row(j));
      gram[i * n + j] = k;
      gram[j * n + i] = k;
    }
  }
  return gram;
}

std::vector<double> gram_matrix_serial(const KernelSpec& kernel, const FeatureMatrix& x) {
  const std::size_t n = x.rows;
  std::vector<double> gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double k = detail::kernel_unchecked(kernel, x.row(i), x.row(j));
      gram[i * n + j] = k;
      gram[j * n + i] = k;
    }
  }
  return gram;
}

void kernel_row(const KernelSpec& kernel, const FeatureMatrix& x, std::size_t i, std::span<double> out) {
  const auto rows = static_cast<std::int64_t>(x.rows);
  const auto xi = x.row(i);
#pragma omp parallel for schedule(static) if (rows > 2048)
  for (std::int64_t j = 0; j < rows; ++j) {
    out[static_cast<std::size_t>(j)] = detail::kernel_unchecked(kernel, xi, x.row(static_cast<std::size_t>(j)));
  }
}

std::vector<double> decision_values(const SvmModel& model, const FeatureMatrix& x) {
  if (x.cols != model.dimension) throw std::domain_error("decision_values: dimension mismatch");
  std::vector<double> out(x.rows);
  const auto rows = static_cast<std::int64_t>(x.rows);
#pragma omp parallel
  {
    std::vector<double> z(model.dimension);
#pragma omp for schedule(dynamic, 32)
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto i = static_cast<std::size_t>(r);
      model.standardization.apply(x.row(i), z);
      out[i] = detail::score_standardized(model, z);
    }
  }
  return out;
}

std::vector<double> decision_values_serial(const SvmModel& model, const FeatureMatrix& x) {
  if (x.cols != model.dimension) throw std::domain_error("decision_values: dimension mismatch");
  std::vector<double> out(x.rows);
  std::vector<double> z(model.dimension);
  for (std::size_t i = 0; i < x.rows; ++i) {
    model.standardization.apply(x.row(i), z);
    out[i] = detail::score_standardized(model, z);
  }
  return out;
}

}  // namespace coopsense::svm
