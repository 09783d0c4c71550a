#pragma once

// Stacked ensemble of bagged SVMs. Base models are trained on bootstrap
// replicas of one part of the training data; a linear SVM combiner is then
// fitted to their decision values on the held-out stacking part.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coopsense/random.hpp"
#include "coopsense/sensing.hpp"
#include "coopsense/svm.hpp"

namespace coopsense::ensemble {

struct BaseSpec {
  svm::KernelSpec kernel;
  double theta = 1.0;
};

struct EnsembleOptions {
  std::size_t per_spec = 3;      // bootstrap replicas per base spec
  double bag_fraction = 1.0;     // replica size as a fraction of the base part
  double stacking_split = 0.2;   // fraction held out for the combiner
  double tol = 1e-3;             // SMO tolerance for bases and combiner
  /// Soft-margin constant of the combiner; 0 selects 1 / (stacking rows),
  /// i.e. unit regularization against the mean hinge loss. The base decision
  /// values are nearly collinear, and a loosely regularized combiner chases
  /// the tails of the rbf/poly scores.
  double combiner_theta = 0.0;
  std::size_t max_redraws = 10;  // single-class replica retries
};

struct EnsembleModel {
  std::vector<svm::SvmModel> base_models;
  svm::SvmModel combiner;  // linear kernel over base decision values
  double bag_fraction = 1.0;
  double stacking_split = 0.2;
};

/// round(fraction * L) rows drawn uniformly with replacement.
sensing::Dataset bootstrap_sample(const sensing::Dataset& data, double fraction, RngStream& rng);

/// Base models train in parallel, each on its own substream of `seed`.
EnsembleModel train_ensemble(const sensing::Dataset& data, std::span<const BaseSpec> specs,
                             const EnsembleOptions& options, std::uint64_t seed);

/// Combiner score assembled from prior base decision values.
double combine(const EnsembleModel& model, std::span<const double> base_scores);

double ensemble_score(const EnsembleModel& model, std::span<const double> x);
/// sign(ensemble_score), zero mapped to +1.
int ensemble_classify(const EnsembleModel& model, std::span<const double> x);

std::vector<double> ensemble_scores(const EnsembleModel& model, const svm::FeatureMatrix& x);

/// Writes base_NN.svm files and `ensemble.manifest` (which embeds the
/// combiner) into `directory`; returns the manifest path.
std::string save_ensemble(const std::string& directory, const EnsembleModel& model);
EnsembleModel load_ensemble(const std::string& manifest_path);

}  // namespace coopsense::ensemble
