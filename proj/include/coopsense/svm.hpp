#pragma once

// Soft-margin kernel SVM trained on the dual
//
//   max W(a) = sum a_i - 1/2 sum_ij y_i y_j a_i a_j k(x_i, x_j)
//   s.t.  sum y_i a_i = 0,  0 <= a_i <= theta
//
// with decision function f(x) = sum a_i y_i k(x, x_i) + bias.

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopsense/sensing.hpp"

namespace coopsense::svm {

enum class KernelKind { kLinear, kPolynomial, kRbf };

struct KernelSpec {
  KernelKind kind = KernelKind::kLinear;
  int degree = 2;      // polynomial only, >= 2
  double sigma = 1.0;  // rbf only, > 0

  static KernelSpec linear() { return {KernelKind::kLinear, 2, 1.0}; }
  static KernelSpec polynomial(int degree) { return {KernelKind::kPolynomial, degree, 1.0}; }
  static KernelSpec rbf(double sigma) { return {KernelKind::kRbf, 2, sigma}; }

  void validate() const;
  /// "linear", "poly" or "rbf".
  std::string name() const;
  bool operator==(const KernelSpec&) const = default;
};

KernelKind parse_kernel_kind(const std::string& name);

/// Exact kernel value. Throws std::domain_error on a dimension mismatch.
double kernel_eval(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y);

/// Dense row-major matrix of feature rows.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
};

FeatureMatrix to_matrix(const sensing::Dataset& data);

/// Per-dimension z-score using training statistics. Identity in raw mode.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardization identity(std::size_t dim);
  static Standardization fit(const FeatureMatrix& x);
  void apply(std::span<const double> in, std::span<double> out) const;
  FeatureMatrix apply(const FeatureMatrix& x) const;
  bool operator==(const Standardization&) const = default;
};

struct SvmModel {
  KernelSpec kernel;
  double theta = 1.0;
  double bias = 0.0;
  std::size_t dimension = 0;
  Standardization standardization;
  // Stored in standardized coordinates; only entries with alpha > 0.
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> alphas;
  std::vector<int> sv_labels;

  std::size_t num_support_vectors() const { return alphas.size(); }
};

struct TrainOptions {
  double theta = 1.0;
  double tol = 1e-3;
  bool standardize = true;
  /// Pair updates before giving up; 0 means max(1e7, 100 L).
  std::size_t max_iterations = 0;
};

struct TrainDiagnostics {
  std::size_t iterations = 0;
  double max_violation = 0.0;  // KKT gap of the last iterate
  double dual_objective = 0.0;
};

class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, TrainDiagnostics diagnostics)
      : std::runtime_error(what), diagnostics_(diagnostics) {}
  const TrainDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  TrainDiagnostics diagnostics_;
};

/// Sequential two-variable ascent on the dual with second-order working-pair
/// selection. Stops once the maximal KKT violation of the working set is
/// below tol. Throws TrainingError on single-class data or non-convergence.
SvmModel train_smo(const sensing::Dataset& data, const KernelSpec& kernel, const TrainOptions& options = {},
                   TrainDiagnostics* diagnostics = nullptr);
SvmModel train_smo(const FeatureMatrix& x, std::span<const int> labels, const KernelSpec& kernel,
                   const TrainOptions& options = {}, TrainDiagnostics* diagnostics = nullptr);

/// Pre-sign score sum a_i y_i k(x, x_i) + bias for a raw (unstandardized) x.
double decision_value(const SvmModel& model, std::span<const double> x);

/// sign(decision_value) with a zero score mapped to +1.
int classify(const SvmModel& model, std::span<const double> x);

/// Largest KKT residual over the training rows. Rows are matched to support
/// vectors by value; unmatched rows carry alpha = 0.
double kkt_violation(const SvmModel& model, const sensing::Dataset& data);

/// W(a) over the stored multipliers.
double dual_objective(const SvmModel& model);

void write_model(std::ostream& out, const SvmModel& model);
SvmModel read_model(std::istream& in);
void save_model(const std::string& path, const SvmModel& model);
SvmModel load_model(const std::string& path);

}  // namespace coopsense::svm
