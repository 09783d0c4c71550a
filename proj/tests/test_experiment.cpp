#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "coopsense/experiment.hpp"
#include "coopsense/text_io.hpp"

using namespace coopsense;
using experiment::ConfigError;
using experiment::ExperimentConfig;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small() {
  auto c = ExperimentConfig::defaults();
  c.train_size = 200;
  c.test_size = 300;
  c.ensemble.per_spec = 2;
  return c;
}

std::string key_of(const std::string& json_text) {
  try {
    (void)experiment::parse_config(json_text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

// Replaces the first occurrence of `from` in the default document.
std::string edited(const std::string& from, const std::string& to) {
  std::string text = experiment::to_json(ExperimentConfig::defaults());
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("coopsense_experiment_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("shipped default config equals the built-in defaults") {
  const auto text = slurp(fs::path(COOPSENSE_SOURCE_DIR) / "configs" / "default.json");
  CHECK(experiment::to_json(experiment::parse_config(text)) == experiment::to_json(ExperimentConfig::defaults()));
}

TEST_CASE("config errors name the offending key") {
  CHECK(key_of(edited("\"M\": 2,", "")) == "sensing.M");
  CHECK(key_of(edited("\"M\": 2,", "\"M\": 2, \"Mx\": 1,")) == "sensing.Mx");
  CHECK(key_of(edited("\"M\": 2,", "\"M\": \"two\",")) == "sensing.M");
  CHECK(key_of(edited("\"M\": 2,", "\"M\": 0,")) == "sensing.M");
  CHECK(key_of(edited("\"L_train\": 2000", "\"L_train\": 9")) == "data.L_train");
  CHECK(key_of(edited("\"kernel\": \"rbf\"", "\"kernel\": \"tanh\"")) == "classifiers.svm[2].kernel");
  CHECK(key_of(edited("\"sigma\": 1.0", "\"sigma\": -1.0")) == "classifiers.svm[2]");
  CHECK(key_of(edited("\"all\"", "7")) == "fusion.k");
  CHECK(key_of(edited("\"seed\": 1,", "")) == "seed");
  CHECK(key_of("{ not json") == "<root>");
  CHECK(key_of(experiment::to_json(ExperimentConfig::defaults())).empty());
}

TEST_CASE("run writes deterministic artifacts") {
  const auto a = scratch("run_a");
  const auto b = scratch("run_b");
  const auto ra = experiment::run(small(), a.string());
  (void)experiment::run(small(), b.string());

  std::set<std::string> names;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    names.insert(rel.string());
    CAPTURE(rel.string());
    CHECK(slurp(entry.path()) == slurp(b / rel));
  }
  for (const char* expected : {"config.json", "train.csv", "train.csv.meta", "test.csv", "summary.csv",
                               "roc_linear.csv", "roc_linear.meta", "roc_ensemble.csv", "roc_fusion_or.csv",
                               "fusion_and_grid.csv", "models/rbf.svm", "models/ensemble/ensemble.manifest"}) {
    CHECK(names.contains(expected));
  }

  // One row per configured classifier, the ensemble and every fusion rule.
  const std::vector<std::string> expected_rows{"linear", "poly", "rbf", "ensemble", "fusion_or", "fusion_k2", "fusion_and"};
  REQUIRE(ra.rows.size() == expected_rows.size());
  for (std::size_t i = 0; i < expected_rows.size(); ++i) {
    CHECK(ra.rows[i].classifier == expected_rows[i]);
    REQUIRE(ra.rows[i].auc.has_value());
    CHECK(*ra.rows[i].auc > 0.5);
  }
  const auto summary = slurp(a / "summary.csv");
  CHECK(summary.starts_with("classifier,auc,pd_at_pfa_0.1\n"));
  CHECK(std::ranges::count(summary, '\n') == 8);

  // The stored config reproduces the run.
  const auto again = experiment::run(experiment::load_config((a / "config.json").string()), std::nullopt);
  CHECK(*again.find("ensemble")->auc == *ra.find("ensemble")->auc);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("train and test rows are disjoint") {
  const auto data = experiment::generate_datasets(small());
  std::set<std::vector<double>> train_rows;
  for (const auto& r : data.train.rows) train_rows.insert(r.energies);
  for (const auto& r : data.test.rows) CHECK_FALSE(train_rows.contains(r.energies));
}

TEST_CASE("stand-alone stages agree with run") {
  const auto dir = scratch("stages");
  auto config = small();
  experiment::generate_command(config, dir.string());
  experiment::train_command(config, (dir / "train.csv").string(), dir.string());
  const auto staged = experiment::eval_command(config, (dir / "models").string(), (dir / "test.csv").string(),
                                               (dir / "eval").string());
  const auto direct = experiment::run(config, std::nullopt);
  REQUIRE(staged.rows.size() == direct.rows.size());
  for (std::size_t i = 0; i < staged.rows.size(); ++i) {
    CHECK(staged.rows[i].classifier == direct.rows[i].classifier);
    CHECK(*staged.rows[i].auc == *direct.rows[i].auc);
  }
  fs::remove_all(dir);
}

TEST_CASE("failed classifiers become error rows") {
  const auto config = small();
  const auto data = experiment::generate_datasets(config);
  auto trained = experiment::train_classifiers(config, data.train);
  trained.svms.erase(trained.svms.begin());
  trained.failures.push_back({"linear", std::nullopt, std::nullopt, "did not converge"});
  const auto dir = scratch("failure");
  const auto result = experiment::evaluate(config, trained, data.test, dir.string());
  const auto* row = result.find("linear");
  REQUIRE(row != nullptr);
  CHECK_FALSE(row->auc.has_value());
  CHECK(slurp(dir / "summary.csv").find("linear,error,error\n") != std::string::npos);
  CHECK(result.find("rbf")->auc.has_value());
  fs::remove_all(dir);
}

TEST_CASE("sweeps") {
  const auto dir = scratch("sweep");
  auto config = small();
  config.ensemble.enabled = false;
  const auto entries = experiment::sweep(config, experiment::SweepAxis::kSnrDb, {-5, 0, 5}, dir.string());
  CHECK(entries.size() == 3);
  for (const char* sub : {"snr_db_-5", "snr_db_0", "snr_db_5"}) CHECK(fs::exists(dir / sub / "summary.csv"));
  const auto csv = slurp(dir / "sweep.csv");
  CHECK(csv.starts_with("axis_value,classifier,auc\n"));
  const std::size_t per_run = config.classifiers.size() + config.fusion_rules().size();
  CHECK(static_cast<std::size_t>(std::ranges::count(csv, '\n')) == 1 + 3 * per_run);

  const auto sus = scratch("sweep_sus");
  (void)experiment::sweep(config, experiment::SweepAxis::kNumSus, {2, 4}, sus.string());
  CHECK(sensing::load_dataset((sus / "num_sus_2" / "test.csv").string()).dimension() == 2);
  CHECK(sensing::load_dataset((sus / "num_sus_4" / "test.csv").string()).dimension() == 4);

  CHECK_THROWS_AS(experiment::sweep(config, experiment::SweepAxis::kSnrDb, {}, std::nullopt), ConfigError);
  CHECK_THROWS_AS(experiment::sweep(config, experiment::SweepAxis::kSampleSize, {2.5}, std::nullopt), ConfigError);
  CHECK(experiment::parse_axis("M") == experiment::SweepAxis::kSampleSize);
  CHECK_THROWS_AS(experiment::parse_axis("bogus"), ConfigError);
  fs::remove_all(dir);
  fs::remove_all(sus);
}
