#pragma once

#include <cmath>
#include <span>

#include "coopsense/svm.hpp"

namespace coopsense::svm::detail {

inline double kernel_unchecked(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y) {
  switch (kernel.kind) {
    case KernelKind::kLinear: {
      double dot = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * y[k];
      return dot;
    }
    case KernelKind::kPolynomial: {
      double dot = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) dot += x[k] * y[k];
      return std::pow(dot + 1.0, kernel.degree);
    }
    case KernelKind::kRbf: {
      double dist = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        dist += d * d;
      }
      return std::exp(-dist / (2.0 * kernel.sigma * kernel.sigma));
    }
  }
  return 0.0;
}

inline double score_standardized(const SvmModel& model, std::span<const double> z) {
  double sum = 0.0;
  for (std::size_t s = 0; s < model.alphas.size(); ++s) {
    sum += model.alphas[s] * model.sv_labels[s] * kernel_unchecked(model.kernel, z, model.support_vectors[s]);
  }
  return sum + model.bias;
}

}  // namespace coopsense::svm::detail
