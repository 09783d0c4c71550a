#pragma once

// End-to-end experiment: dataset generation, classifier training, ROC/AUC
// evaluation against hard-fusion baselines, parameter sweeps and the text
// artifacts they emit.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopsense/ensemble.hpp"
#include "coopsense/sensing.hpp"
#include "coopsense/svm.hpp"

namespace coopsense::experiment {

/// Invalid configuration; `key()` is the dotted path of the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)), message_(message) {}
  const std::string& key() const { return key_; }
  const std::string& message() const { return message_; }

 private:
  std::string key_;
  std::string message_;
};

struct ClassifierSpec {
  std::string name;  // unique within a config
  svm::KernelSpec kernel;
  double theta = 1.0;
};

struct EnsembleSettings {
  bool enabled = true;
  std::size_t per_spec = 3;
  double bag_fraction = 1.0;
  double stacking_split = 0.2;
  double combiner_theta = 0.0;  // 0: 1 / (stacking rows); "auto" in JSON
};

struct ThresholdGrid {
  double min = 0.0;
  double max = 4.0;
  std::size_t count = 41;
  std::vector<double> values() const;
};

struct ExperimentConfig {
  double alpha = 2.0;
  double kappa = 2.0;
  double mu = 2.0;
  double gamma_bar_db = 0.0;
  std::size_t num_samples = 2;
  std::size_t num_sus = 3;
  double prior_h1 = 0.5;
  std::size_t train_size = 2000;
  std::size_t test_size = 4000;
  std::vector<ClassifierSpec> classifiers;
  EnsembleSettings ensemble;
  double tol = 1e-3;
  std::vector<std::size_t> fusion_k;  // 0 encodes "all" (AND rule)
  ThresholdGrid thresholds;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  /// The documented default scenario.
  static ExperimentConfig defaults();

  void validate() const;
  sensing::SensingConfig sensing() const;
  std::vector<ensemble::BaseSpec> base_specs() const;
  /// Resolved k for each fusion entry together with its display name.
  std::vector<std::pair<std::string, std::size_t>> fusion_rules() const;
};

/// Parses a JSON document. Every key is required and unknown keys are
/// rejected; errors name the dotted key path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string to_json(const ExperimentConfig& config);

struct SummaryRow {
  std::string classifier;
  std::optional<double> auc;
  std::optional<double> pd_at_pfa_01;
  std::string error;  // empty on success
};

struct RunResult {
  std::vector<SummaryRow> rows;
  const SummaryRow* find(const std::string& classifier) const;
};

/// Train and test datasets of a run, from disjoint substreams of the seed.
struct DatasetPair {
  sensing::Dataset train;
  sensing::Dataset test;
};
DatasetPair generate_datasets(const ExperimentConfig& config);

struct TrainedClassifiers {
  std::vector<std::pair<std::string, svm::SvmModel>> svms;
  std::optional<ensemble::EnsembleModel> ensemble;
  std::vector<SummaryRow> failures;
};
TrainedClassifiers train_classifiers(const ExperimentConfig& config, const sensing::Dataset& train);

/// Scores the test set and writes ROC files and summary.csv when
/// `output_dir` is set.
RunResult evaluate(const ExperimentConfig& config, const TrainedClassifiers& trained, const sensing::Dataset& test,
                   const std::optional<std::string>& output_dir);

/// generate + train + evaluate. With an output directory, every artifact
/// (config.json, datasets, models, ROC CSVs, summary.csv) is written there.
RunResult run(const ExperimentConfig& config, const std::optional<std::string>& output_dir);

// Stand-alone stages used by the CLI.
void generate_command(const ExperimentConfig& config, const std::string& output_dir);
void train_command(const ExperimentConfig& config, const std::string& train_csv, const std::string& output_dir);
RunResult eval_command(const ExperimentConfig& config, const std::string& models_dir, const std::string& test_csv,
                       const std::string& output_dir);

enum class SweepAxis { kSampleSize, kSnrDb, kNumSus, kTrainSize };
SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

/// Copy of `config` with the axis set to `value`.
ExperimentConfig with_axis(const ExperimentConfig& config, SweepAxis axis, double value);

struct SweepEntry {
  double value;
  RunResult result;
};

/// One run per value (sub-seed i for value i) in its own directory plus
/// sweep.csv with header axis_value,classifier,auc.
std::vector<SweepEntry> sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<double>& values,
                              const std::optional<std::string>& output_dir);

}  // namespace coopsense::experiment
