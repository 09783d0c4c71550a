#pragma once

// Data-parallel kernel evaluation. Each OpenMP routine has a serial twin with
// identical arithmetic; tests require bitwise agreement between the two.

#include <span>
#include <vector>

#include "coopsense/svm.hpp"

namespace coopsense::svm {

/// Full symmetric Gram matrix K_ij = k(x_i, x_j), row-major.
std::vector<double> gram_matrix(const KernelSpec& kernel, const FeatureMatrix& x);
std::vector<double> gram_matrix_serial(const KernelSpec& kernel, const FeatureMatrix& x);

/// out[j] = k(x_i, x_j) for all j.
void kernel_row(const KernelSpec& kernel, const FeatureMatrix& x, std::size_t i, std::span<double> out);

/// decision_value for every row of a raw feature matrix.
std::vector<double> decision_values(const SvmModel& model, const FeatureMatrix& x);
std::vector<double> decision_values_serial(const SvmModel& model, const FeatureMatrix& x);

}  // namespace coopsense::svm
