#include "coopsense/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "coopsense/kernels.hpp"
#include "coopsense/text_io.hpp"

namespace coopsense::ensemble {

sensing::Dataset bootstrap_sample(const sensing::Dataset& data, double fraction, RngStream& rng) {
  if (data.rows.empty()) throw std::domain_error("bootstrap_sample: empty dataset");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::domain_error("bootstrap_sample: fraction must be in (0, 1]");
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(data.size()))));
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  sensing::Dataset out;
  out.config = data.config;
  out.seed = data.seed;
  out.rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.rows.push_back(data.rows[pick(rng)]);
  return out;
}

namespace {

sensing::Dataset subset(const sensing::Dataset& data, std::span<const std::size_t> indices) {
  sensing::Dataset out;
  out.config = data.config;
  out.seed = data.seed;
  out.rows.reserve(indices.size());
  for (std::size_t i : indices) out.rows.push_back(data.rows[i]);
  return out;
}

svm::FeatureMatrix base_score_matrix(const EnsembleModel& model, const svm::FeatureMatrix& x) {
  const std::size_t b = model.base_models.size();
  svm::FeatureMatrix scores(x.rows, b);
  for (std::size_t m = 0; m < b; ++m) {
    const auto column = svm::decision_values(model.base_models[m], x);
    for (std::size_t i = 0; i < x.rows; ++i) scores.row(i)[m] = column[i];
  }
  return scores;
}

}  // namespace

EnsembleModel train_ensemble(const sensing::Dataset& data, std::span<const BaseSpec> specs,
                             const EnsembleOptions& options, std::uint64_t seed) {
  if (specs.empty()) throw std::invalid_argument("train_ensemble: no base specs");
  if (options.per_spec < 1) throw std::invalid_argument("train_ensemble: per_spec must be >= 1");
  if (!(options.stacking_split > 0.0 && options.stacking_split < 1.0)) {
    throw std::invalid_argument("train_ensemble: stacking_split must be in (0, 1)");
  }
  if (!data.has_both_labels()) throw svm::TrainingError("train_ensemble: training data contains a single class", {});

  // Split into base and stacking parts.
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  RngStream split_rng = substream(seed, 0);
  std::shuffle(order.begin(), order.end(), split_rng);
  const auto stack_count = static_cast<std::size_t>(std::llround(options.stacking_split * static_cast<double>(data.size())));
  if (stack_count == 0 || stack_count >= data.size()) {
    throw std::invalid_argument("train_ensemble: stacking split leaves an empty part");
  }
  const std::size_t base_count = data.size() - stack_count;
  const sensing::Dataset base_part = subset(data, std::span(order).first(base_count));
  const sensing::Dataset stack_part = subset(data, std::span(order).subspan(base_count));
  if (!stack_part.has_both_labels()) {
    throw svm::TrainingError(
        "train_ensemble: stacking split contains a single class; use a larger stacking_split or another seed", {});
  }

  const std::size_t tasks = specs.size() * options.per_spec;
  std::vector<std::optional<svm::SvmModel>> trained(tasks);
  const auto task_count = static_cast<std::int64_t>(tasks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t tt = 0; tt < task_count; ++tt) {
    const auto t = static_cast<std::size_t>(tt);
    const BaseSpec& spec = specs[t / options.per_spec];
    const std::uint64_t task_seed = derive_seed(seed, 1 + t);
    for (std::size_t attempt = 0; attempt <= options.max_redraws; ++attempt) {
      RngStream rng = substream(task_seed, attempt);
      const sensing::Dataset replica = bootstrap_sample(base_part, options.bag_fraction, rng);
      if (!replica.has_both_labels()) continue;
      try {
        svm::TrainOptions train;
        train.theta = spec.theta;
        train.tol = options.tol;
        trained[t] = svm::train_smo(replica, spec.kernel, train);
      } catch (const svm::TrainingError&) {
        // Dropped from the ensemble.
      }
      break;
    }
  }

  EnsembleModel model;
  model.bag_fraction = options.bag_fraction;
  model.stacking_split = options.stacking_split;
  for (auto& m : trained) {
    if (m) model.base_models.push_back(std::move(*m));
  }
  if (model.base_models.empty()) throw svm::TrainingError("train_ensemble: every base classifier failed to train", {});

  const svm::FeatureMatrix meta_features = base_score_matrix(model, svm::to_matrix(stack_part));
  std::vector<int> meta_labels;
  for (const auto& row : stack_part.rows) meta_labels.push_back(row.label);
  svm::TrainOptions combiner_options;
  combiner_options.theta =
      options.combiner_theta > 0.0 ? options.combiner_theta : 1.0 / static_cast<double>(stack_part.size());
  combiner_options.tol = options.tol;
  model.combiner = svm::train_smo(meta_features, meta_labels, svm::KernelSpec::linear(), combiner_options);
  return model;
}

double combine(const EnsembleModel& model, std::span<const double> base_scores) {
  return svm::decision_value(model.combiner, base_scores);
}

double ensemble_score(const EnsembleModel& model, std::span<const double> x) {
  std::vector<double> base(model.base_models.size());
  for (std::size_t m = 0; m < base.size(); ++m) base[m] = svm::decision_value(model.base_models[m], x);
  return combine(model, base);
}

int ensemble_classify(const EnsembleModel& model, std::span<const double> x) {
  return ensemble_score(model, x) >= 0.0 ? 1 : -1;
}

std::vector<double> ensemble_scores(const EnsembleModel& model, const svm::FeatureMatrix& x) {
  return svm::decision_values(model.combiner, base_score_matrix(model, x));
}

namespace {
constexpr const char* kManifestMagic = "ensemble_manifest v1";
constexpr const char* kManifestEnd = "end_header";
}  // namespace

std::string save_ensemble(const std::string& directory, const EnsembleModel& model) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  std::vector<std::string> names;
  for (std::size_t m = 0; m < model.base_models.size(); ++m) {
    char name[32];
    std::snprintf(name, sizeof name, "base_%02zu.svm", m);
    names.emplace_back(name);
    svm::save_model((fs::path(directory) / name).string(), model.base_models[m]);
  }
  const std::string manifest = (fs::path(directory) / "ensemble.manifest").string();
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + manifest);
  out << kManifestMagic << '\n'
      << "bag_fraction=" << text_io::format_double(model.bag_fraction) << '\n'
      << "stacking_split=" << text_io::format_double(model.stacking_split) << '\n'
      << "base_models=" << names.size() << '\n'
      << kManifestEnd << '\n';
  for (const auto& name : names) out << name << '\n';
  svm::write_model(out, model.combiner);
  return manifest;
}

EnsembleModel load_ensemble(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + manifest_path);
  std::string line;
  if (!std::getline(in, line) || line != kManifestMagic) throw std::invalid_argument("ensemble manifest: bad magic line");
  const auto kv = text_io::read_key_values(in, kManifestEnd);
  EnsembleModel model;
  model.bag_fraction = text_io::parse_double(text_io::require_key(kv, "bag_fraction"));
  model.stacking_split = text_io::parse_double(text_io::require_key(kv, "stacking_split"));
  const auto count = static_cast<std::size_t>(text_io::parse_int(text_io::require_key(kv, "base_models")));
  const fs::path dir = fs::path(manifest_path).parent_path();
  for (std::size_t m = 0; m < count; ++m) {
    if (!std::getline(in, line)) throw std::invalid_argument("ensemble manifest: truncated base list");
    model.base_models.push_back(svm::load_model((dir / line).string()));
  }
  model.combiner = svm::read_model(in);
  if (model.combiner.dimension != model.base_models.size()) {
    throw std::invalid_argument("ensemble manifest: combiner dimension does not match base count");
  }
  return model;
}

}  // namespace coopsense::ensemble
