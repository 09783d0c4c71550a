#include "coopsense/experiment.hpp"

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coopsense/eval.hpp"
#include "coopsense/fusion.hpp"
#include "coopsense/kernels.hpp"
#include "coopsense/random.hpp"
#include "coopsense/text_io.hpp"

namespace coopsense::experiment {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::vector<double> ThresholdGrid::values() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.classifiers = {{"linear", svm::KernelSpec::linear(), 1.0},
                   {"poly", svm::KernelSpec::polynomial(2), 1.0},
                   {"rbf", svm::KernelSpec::rbf(1.0), 1.0}};
  c.fusion_k = {1, 2, 0};
  return c;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& msg) { throw ConfigError(key, msg); };
  if (!(alpha > 0.0)) fail("fading.alpha", "must be > 0");
  if (!(kappa >= 0.0)) fail("fading.kappa", "must be >= 0");
  if (!(mu > 0.0)) fail("fading.mu", "must be > 0");
  if (!std::isfinite(gamma_bar_db)) fail("fading.gamma_bar_db", "must be finite");
  if (num_samples < 1) fail("sensing.M", "must be >= 1");
  if (num_sus < 1) fail("sensing.N", "must be >= 1");
  if (!(prior_h1 >= 0.0 && prior_h1 <= 1.0)) fail("sensing.prior_h1", "must be in [0, 1]");
  if (train_size < 10) fail("data.L_train", "must be >= 10");
  if (test_size < 10) fail("data.L_test", "must be >= 10");
  if (classifiers.empty()) fail("classifiers.svm", "at least one classifier is required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < classifiers.size(); ++i) {
    const std::string key = "classifiers.svm[" + std::to_string(i) + "]";
    const auto& spec = classifiers[i];
    try {
      spec.kernel.validate();
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
    if (!(spec.theta > 0.0)) fail(key + ".theta", "must be > 0");
    if (spec.name.empty() || spec.name == "ensemble" || spec.name.starts_with("fusion_")) fail(key + ".name", "reserved or empty");
    if (!names.insert(spec.name).second) fail(key + ".name", "duplicate classifier name");
  }
  if (!(tol > 0.0)) fail("classifiers.tol", "must be > 0");
  if (ensemble.per_spec < 1) fail("classifiers.ensemble.per_spec", "must be >= 1");
  if (!(ensemble.bag_fraction > 0.0 && ensemble.bag_fraction <= 1.0)) fail("classifiers.ensemble.bag_fraction", "must be in (0, 1]");
  if (!(ensemble.stacking_split > 0.0 && ensemble.stacking_split < 1.0)) fail("classifiers.ensemble.stacking_split", "must be in (0, 1)");
  if (!(ensemble.combiner_theta >= 0.0)) fail("classifiers.ensemble.combiner_theta", "must be positive or auto");
  for (std::size_t k : fusion_k) {
    if (k > num_sus) fail("fusion.k", "k = " + std::to_string(k) + " exceeds N = " + std::to_string(num_sus));
  }
  if (thresholds.count < 1) fail("fusion.thresholds.count", "must be >= 1");
  if (!(thresholds.max >= thresholds.min)) fail("fusion.thresholds.max", "must be >= min");
  if (output_dir.empty()) fail("output_dir", "must not be empty");
}

sensing::SensingConfig ExperimentConfig::sensing() const {
  sensing::SensingConfig s;
  s.num_samples = num_samples;
  s.num_sus = num_sus;
  s.prior_h1 = prior_h1;
  s.fading = {alpha, kappa, mu, std::pow(10.0, gamma_bar_db / 10.0)};
  return s;
}

std::vector<ensemble::BaseSpec> ExperimentConfig::base_specs() const {
  std::vector<ensemble::BaseSpec> specs;
  for (const auto& c : classifiers) specs.push_back({c.kernel, c.theta});
  return specs;
}

std::vector<std::pair<std::string, std::size_t>> ExperimentConfig::fusion_rules() const {
  std::vector<std::pair<std::string, std::size_t>> rules;
  for (std::size_t k : fusion_k) {
    if (k == 0) {
      rules.emplace_back("fusion_and", num_sus);
    } else if (k == 1) {
      rules.emplace_back("fusion_or", 1);
    } else {
      rules.emplace_back("fusion_k" + std::to_string(k), k);
    }
  }
  return rules;
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& name) const { return path_.empty() ? name : path_ + "." + name; }

  const json& at(const std::string& name) {
    seen_.insert(name);
    const auto it = node_.find(name);
    if (it == node_.end()) throw ConfigError(key(name), "missing required key");
    return *it;
  }

  bool has(const std::string& name) const { return node_.contains(name); }

  double number(const std::string& name) {
    const json& v = at(name);
    if (!v.is_number()) throw ConfigError(key(name), "expected a number");
    return v.get<double>();
  }

  std::uint64_t count(const std::string& name) {
    const json& v = at(name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(key(name), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& name) {
    const json& v = at(name);
    if (!v.is_boolean()) throw ConfigError(key(name), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& name) {
    const json& v = at(name);
    if (!v.is_string()) throw ConfigError(key(name), "expected a string");
    return v.get<std::string>();
  }

  Section child(const std::string& name) { return Section(at(name), key(name)); }

  void reject_unknown() const {
    for (const auto& [name, value] : node_.items()) {
      if (!seen_.contains(name)) throw ConfigError(key(name), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

ClassifierSpec parse_classifier(const json& node, const std::string& path) {
  Section s(node, path);
  ClassifierSpec spec;
  const std::string kind = s.string("kernel");
  try {
    spec.kernel.kind = svm::parse_kernel_kind(kind);
  } catch (const std::invalid_argument&) {
    throw ConfigError(s.key("kernel"), "expected linear, poly or rbf");
  }
  spec.theta = s.number("theta");
  if (spec.kernel.kind == svm::KernelKind::kPolynomial) spec.kernel.degree = static_cast<int>(s.count("degree"));
  if (spec.kernel.kind == svm::KernelKind::kRbf) spec.kernel.sigma = s.number("sigma");
  spec.name = s.has("name") ? s.string("name") : spec.kernel.name();
  s.reject_unknown();
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  Section top(root, "");
  ExperimentConfig c;

  Section fading = top.child("fading");
  c.alpha = fading.number("alpha");
  c.kappa = fading.number("kappa");
  c.mu = fading.number("mu");
  c.gamma_bar_db = fading.number("gamma_bar_db");
  fading.reject_unknown();

  Section sensing = top.child("sensing");
  c.num_samples = sensing.count("M");
  c.num_sus = sensing.count("N");
  c.prior_h1 = sensing.number("prior_h1");
  sensing.reject_unknown();

  Section data = top.child("data");
  c.train_size = data.count("L_train");
  c.test_size = data.count("L_test");
  data.reject_unknown();

  Section classifiers = top.child("classifiers");
  const json& list = classifiers.at("svm");
  if (!list.is_array()) throw ConfigError("classifiers.svm", "expected an array");
  std::map<std::string, int> seen_names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    ClassifierSpec spec = parse_classifier(list[i], "classifiers.svm[" + std::to_string(i) + "]");
    if (!list[i].contains("name") && seen_names[spec.name]++ > 0) {
      spec.name += "_" + std::to_string(seen_names[spec.name]);
    }
    c.classifiers.push_back(std::move(spec));
  }
  c.tol = classifiers.number("tol");
  Section ens = classifiers.child("ensemble");
  c.ensemble.enabled = ens.boolean("enabled");
  c.ensemble.per_spec = ens.count("per_spec");
  c.ensemble.bag_fraction = ens.number("bag_fraction");
  c.ensemble.stacking_split = ens.number("stacking_split");
  if (const json& ct = ens.at("combiner_theta"); ct.is_string() && ct.get<std::string>() == "auto") {
    c.ensemble.combiner_theta = 0.0;
  } else if (ct.is_number() && ct.get<double>() > 0.0) {
    c.ensemble.combiner_theta = ct.get<double>();
  } else {
    throw ConfigError("classifiers.ensemble.combiner_theta", "expected \"auto\" or a positive number");
  }
  ens.reject_unknown();
  classifiers.reject_unknown();

  Section fusion = top.child("fusion");
  const json& ks = fusion.at("k");
  if (!ks.is_array()) throw ConfigError("fusion.k", "expected an array");
  for (const auto& k : ks) {
    if (k.is_string() && k.get<std::string>() == "all") {
      c.fusion_k.push_back(0);
    } else if (k.is_number_integer() && k.get<std::int64_t>() >= 1) {
      c.fusion_k.push_back(k.get<std::size_t>());
    } else {
      throw ConfigError("fusion.k", "entries must be positive integers or \"all\"");
    }
  }
  Section grid = fusion.child("thresholds");
  c.thresholds.min = grid.number("min");
  c.thresholds.max = grid.number("max");
  c.thresholds.count = grid.count("count");
  grid.reject_unknown();
  fusion.reject_unknown();

  c.seed = top.count("seed");
  c.output_dir = top.string("output_dir");
  top.reject_unknown();

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_json(const ExperimentConfig& c) {
  ordered_json svms = ordered_json::array();
  for (const auto& spec : c.classifiers) {
    ordered_json s;
    s["name"] = spec.name;
    s["kernel"] = spec.kernel.name();
    s["theta"] = spec.theta;
    if (spec.kernel.kind == svm::KernelKind::kPolynomial) s["degree"] = spec.kernel.degree;
    if (spec.kernel.kind == svm::KernelKind::kRbf) s["sigma"] = spec.kernel.sigma;
    svms.push_back(std::move(s));
  }
  ordered_json ks = ordered_json::array();
  for (std::size_t k : c.fusion_k) {
    if (k == 0) {
      ks.push_back("all");
    } else {
      ks.push_back(k);
    }
  }
  ordered_json root;
  root["fading"] = {{"alpha", c.alpha}, {"kappa", c.kappa}, {"mu", c.mu}, {"gamma_bar_db", c.gamma_bar_db}};
  root["sensing"] = {{"M", c.num_samples}, {"N", c.num_sus}, {"prior_h1", c.prior_h1}};
  root["data"] = {{"L_train", c.train_size}, {"L_test", c.test_size}};
  root["classifiers"] = {{"svm", svms},
                         {"tol", c.tol},
                         {"ensemble",
                          {{"enabled", c.ensemble.enabled},
                           {"per_spec", c.ensemble.per_spec},
                           {"bag_fraction", c.ensemble.bag_fraction},
                           {"stacking_split", c.ensemble.stacking_split},
                           {"combiner_theta", c.ensemble.combiner_theta > 0.0 ? ordered_json(c.ensemble.combiner_theta)
                                                                             : ordered_json("auto")}}}};
  root["fusion"] = {{"k", ks},
                    {"thresholds", {{"min", c.thresholds.min}, {"max", c.thresholds.max}, {"count", c.thresholds.count}}}};
  root["seed"] = c.seed;
  root["output_dir"] = c.output_dir;
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Stages

const SummaryRow* RunResult::find(const std::string& classifier) const {
  for (const auto& row : rows) {
    if (row.classifier == classifier) return &row;
  }
  return nullptr;
}

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kTestStream = 2;
constexpr std::uint64_t kEnsembleStream = 3;

std::vector<int> labels_of(const sensing::Dataset& data) {
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const auto& row : data.rows) labels.push_back(row.label);
  return labels;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string format_optional(const std::optional<double>& value) {
  return value ? text_io::format_double(*value) : std::string("error");
}

}  // namespace

DatasetPair generate_datasets(const ExperimentConfig& config) {
  config.validate();
  const sensing::EventSimulator simulator(config.sensing());
  return {sensing::generate_dataset(simulator, config.train_size, derive_seed(config.seed, kTrainStream)),
          sensing::generate_dataset(simulator, config.test_size, derive_seed(config.seed, kTestStream))};
}

TrainedClassifiers train_classifiers(const ExperimentConfig& config, const sensing::Dataset& train) {
  TrainedClassifiers out;
  for (const auto& spec : config.classifiers) {
    try {
      svm::TrainOptions options;
      options.theta = spec.theta;
      options.tol = config.tol;
      out.svms.emplace_back(spec.name, svm::train_smo(train, spec.kernel, options));
    } catch (const std::exception& e) {
      out.failures.push_back({spec.name, std::nullopt, std::nullopt, e.what()});
    }
  }
  if (config.ensemble.enabled) {
    try {
      ensemble::EnsembleOptions options;
      options.per_spec = config.ensemble.per_spec;
      options.bag_fraction = config.ensemble.bag_fraction;
      options.stacking_split = config.ensemble.stacking_split;
      options.combiner_theta = config.ensemble.combiner_theta;
      options.tol = config.tol;
      const auto specs = config.base_specs();
      out.ensemble = ensemble::train_ensemble(train, specs, options, derive_seed(config.seed, kEnsembleStream));
    } catch (const std::exception& e) {
      out.failures.push_back({"ensemble", std::nullopt, std::nullopt, e.what()});
    }
  }
  return out;
}

RunResult evaluate(const ExperimentConfig& config, const TrainedClassifiers& trained, const sensing::Dataset& test,
                   const std::optional<std::string>& output_dir) {
  const svm::FeatureMatrix x = svm::to_matrix(test);
  const std::vector<int> labels = labels_of(test);
  std::optional<fs::path> dir;
  if (output_dir) {
    dir = fs::path(*output_dir);
    fs::create_directories(*dir);
  }

  const text_io::KeyValues run_meta = {
      {"M", std::to_string(config.num_samples)},
      {"N", std::to_string(config.num_sus)},
      {"gamma_bar_db", text_io::format_double(config.gamma_bar_db)},
      {"L_test", std::to_string(test.size())},
      {"seed", std::to_string(config.seed)},
  };

  RunResult result;
  auto record = [&](const std::string& name, const std::vector<double>& scores) {
    const eval::RocCurve curve = eval::roc_curve(scores, labels);
    SummaryRow row{name, curve.auc, eval::pd_at_pfa(curve, 0.1), {}};
    if (dir) {
      std::ostringstream csv;
      eval::write_roc_csv(csv, curve);
      write_file(*dir / ("roc_" + name + ".csv"), csv.str());
      std::ostringstream meta;
      auto kv = run_meta;
      kv["classifier"] = name;
      eval::write_roc_meta(meta, curve, kv);
      write_file(*dir / ("roc_" + name + ".meta"), meta.str());
    }
    result.rows.push_back(std::move(row));
  };

  for (const auto& spec : config.classifiers) {
    const auto it = std::ranges::find_if(trained.svms, [&](const auto& p) { return p.first == spec.name; });
    if (it != trained.svms.end()) record(spec.name, svm::decision_values(it->second, x));
  }
  if (trained.ensemble) record("ensemble", ensemble::ensemble_scores(*trained.ensemble, x));
  for (const auto& failure : trained.failures) result.rows.push_back(failure);

  const auto grid = config.thresholds.values();
  for (const auto& [name, k] : config.fusion_rules()) {
    std::vector<double> scores(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) scores[i] = fusion::kth_largest(test.rows[i].energies, k);
    record(name, scores);

    if (dir) {
      // Operating points of the rule over the local threshold grid, with the
      // binomial prediction from the pooled local rates alongside.
      std::ostringstream csv;
      csv << "tau,pd,pfa,pd_binomial,pfa_binomial\n";
      const fusion::FusionRule rule{k};
      std::vector<int> decisions(config.num_sus);
      for (double tau : grid) {
        std::vector<double> fused(test.size());
        double local_pd = 0.0;
        double local_pfa = 0.0;
        for (std::size_t i = 0; i < test.size(); ++i) {
          for (std::size_t n = 0; n < config.num_sus; ++n) {
            decisions[n] = fusion::local_decision(test.rows[i].energies[n], tau);
            (labels[i] > 0 ? local_pd : local_pfa) += decisions[n] > 0 ? 1.0 : 0.0;
          }
          fused[i] = fusion::fuse(decisions, rule);
        }
        const eval::OperatingPoint empirical = eval::pd_pfa_at(fused, labels, 0.0);
        const auto positives = static_cast<double>(std::ranges::count(labels, 1));
        const auto negatives = static_cast<double>(labels.size()) - positives;
        const auto sus = static_cast<double>(config.num_sus);
        const eval::OperatingPoint binomial =
            fusion::fusion_system_curve(local_pd / (positives * sus), local_pfa / (negatives * sus), config.num_sus, k);
        csv << text_io::format_double(tau) << ',' << text_io::format_double(empirical.pd) << ','
            << text_io::format_double(empirical.pfa) << ',' << text_io::format_double(binomial.pd) << ','
            << text_io::format_double(binomial.pfa) << '\n';
      }
      write_file(*dir / (name + "_grid.csv"), csv.str());
    }
  }

  if (dir) {
    std::ostringstream summary;
    summary << "classifier,auc,pd_at_pfa_0.1\n";
    for (const auto& row : result.rows) {
      summary << row.classifier << ',' << format_optional(row.auc) << ',' << format_optional(row.pd_at_pfa_01) << '\n';
    }
    write_file(*dir / "summary.csv", summary.str());
    std::ostringstream errors;
    for (const auto& row : result.rows) {
      if (!row.error.empty()) errors << row.classifier << ": " << row.error << '\n';
    }
    if (!errors.str().empty()) write_file(*dir / "errors.txt", errors.str());
  }
  return result;
}

namespace {

void save_models(const fs::path& dir, const TrainedClassifiers& trained) {
  fs::create_directories(dir);
  for (const auto& [name, model] : trained.svms) svm::save_model((dir / (name + ".svm")).string(), model);
  if (trained.ensemble) ensemble::save_ensemble((dir / "ensemble").string(), *trained.ensemble);
}

}  // namespace

RunResult run(const ExperimentConfig& config, const std::optional<std::string>& output_dir) {
  config.validate();
  if (output_dir) {
    fs::create_directories(*output_dir);
    write_file(fs::path(*output_dir) / "config.json", to_json(config));
  }
  const DatasetPair data = generate_datasets(config);
  if (output_dir) {
    sensing::save_dataset((fs::path(*output_dir) / "train.csv").string(), data.train);
    sensing::save_dataset((fs::path(*output_dir) / "test.csv").string(), data.test);
  }
  const TrainedClassifiers trained = train_classifiers(config, data.train);
  if (output_dir) save_models(fs::path(*output_dir) / "models", trained);
  return evaluate(config, trained, data.test, output_dir);
}

void generate_command(const ExperimentConfig& config, const std::string& output_dir) {
  const DatasetPair data = generate_datasets(config);
  fs::create_directories(output_dir);
  write_file(fs::path(output_dir) / "config.json", to_json(config));
  sensing::save_dataset((fs::path(output_dir) / "train.csv").string(), data.train);
  sensing::save_dataset((fs::path(output_dir) / "test.csv").string(), data.test);
}

void train_command(const ExperimentConfig& config, const std::string& train_csv, const std::string& output_dir) {
  config.validate();
  const sensing::Dataset train = sensing::load_dataset(train_csv);
  if (train.dimension() != config.num_sus) throw ConfigError("sensing.N", "does not match the dataset dimension");
  const TrainedClassifiers trained = train_classifiers(config, train);
  save_models(fs::path(output_dir) / "models", trained);
  std::ostringstream errors;
  for (const auto& f : trained.failures) errors << f.classifier << ": " << f.error << '\n';
  if (!errors.str().empty()) write_file(fs::path(output_dir) / "errors.txt", errors.str());
}

RunResult eval_command(const ExperimentConfig& config, const std::string& models_dir, const std::string& test_csv,
                       const std::string& output_dir) {
  config.validate();
  const sensing::Dataset test = sensing::load_dataset(test_csv);
  if (test.dimension() != config.num_sus) throw ConfigError("sensing.N", "does not match the dataset dimension");
  TrainedClassifiers trained;
  for (const auto& spec : config.classifiers) {
    const fs::path path = fs::path(models_dir) / (spec.name + ".svm");
    if (fs::exists(path)) {
      trained.svms.emplace_back(spec.name, svm::load_model(path.string()));
    } else {
      trained.failures.push_back({spec.name, std::nullopt, std::nullopt, "no model file " + path.string()});
    }
  }
  if (config.ensemble.enabled) {
    const fs::path manifest = fs::path(models_dir) / "ensemble" / "ensemble.manifest";
    if (fs::exists(manifest)) {
      trained.ensemble = ensemble::load_ensemble(manifest.string());
    } else {
      trained.failures.push_back({"ensemble", std::nullopt, std::nullopt, "no manifest " + manifest.string()});
    }
  }
  return evaluate(config, trained, test, output_dir);
}

// ---------------------------------------------------------------------------
// Sweeps

SweepAxis parse_axis(const std::string& name) {
  if (name == "sample_size" || name == "M") return SweepAxis::kSampleSize;
  if (name == "snr_db") return SweepAxis::kSnrDb;
  if (name == "num_sus" || name == "N") return SweepAxis::kNumSus;
  if (name == "train_size" || name == "L") return SweepAxis::kTrainSize;
  throw ConfigError("--axis", "expected sample_size, snr_db, num_sus or train_size");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kSampleSize: return "sample_size";
    case SweepAxis::kSnrDb: return "snr_db";
    case SweepAxis::kNumSus: return "num_sus";
    case SweepAxis::kTrainSize: return "train_size";
  }
  return "unknown";
}

ExperimentConfig with_axis(const ExperimentConfig& config, SweepAxis axis, double value) {
  ExperimentConfig c = config;
  auto as_count = [&](const char* key) {
    if (!(value >= 1.0) || value != std::floor(value)) throw ConfigError(key, "sweep value must be a positive integer");
    return static_cast<std::size_t>(value);
  };
  switch (axis) {
    case SweepAxis::kSampleSize: c.num_samples = as_count("sensing.M"); break;
    case SweepAxis::kSnrDb: c.gamma_bar_db = value; break;
    case SweepAxis::kNumSus: c.num_sus = as_count("sensing.N"); break;
    case SweepAxis::kTrainSize: c.train_size = as_count("data.L_train"); break;
  }
  return c;
}

std::vector<SweepEntry> sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<double>& values,
                              const std::optional<std::string>& output_dir) {
  if (values.empty()) throw ConfigError("sweep.values", "value list must not be empty");
  std::vector<ExperimentConfig> configs;
  std::vector<std::optional<std::string>> dirs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig c = with_axis(config, axis, values[i]);
    c.seed = derive_seed(config.seed, i);
    c.validate();
    if (output_dir) {
      dirs.push_back((fs::path(*output_dir) / (axis_name(axis) + "_" + text_io::format_double(values[i]))).string());
      c.output_dir = *dirs.back();
    } else {
      dirs.emplace_back();
    }
    configs.push_back(std::move(c));
  }

  std::vector<SweepEntry> entries(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  const auto count = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      entries[i] = {values[i], run(configs[i], dirs[i])};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  if (output_dir) {
    std::ostringstream csv;
    csv << "axis_value,classifier,auc\n";
    for (const auto& entry : entries) {
      for (const auto& row : entry.result.rows) {
        csv << text_io::format_double(entry.value) << ',' << row.classifier << ',' << format_optional(row.auc) << '\n';
      }
    }
    write_file(fs::path(*output_dir) / "sweep.csv", csv.str());
  }
  return entries;
}

}  // namespace coopsense::experiment
