// Command-line front end: generate, train, eval, run and sweep.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopsense/experiment.hpp"
#include "coopsense/numerics.hpp"
#include "coopsense/svm.hpp"

namespace ex = coopsense::experiment;

namespace {

// One line, key=value fields; the message is quoted with inner quotes escaped.
void report(const std::string& category, const std::string& key, const std::string& message) {
  std::string quoted;
  for (char c : message) {
    if (c == '"' || c == '\\') quoted += '\\';
    quoted += (c == '\n') ? ' ' : c;
  }
  std::cerr << "error: category=" << category;
  if (!key.empty()) std::cerr << " key=" << key;
  std::cerr << " message=\"" << quoted << "\"\n";
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "override the config seed");
  cmd->add_option("--out", flags.out, "output directory (default: config output_dir)");
}

ex::ExperimentConfig resolve(const CommonFlags& flags) {
  ex::ExperimentConfig config = ex::load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.out) config.output_dir = *flags.out;
  return config;
}

int print_summary(const ex::RunResult& result) {
  for (const auto& row : result.rows) {
    if (row.error.empty()) {
      std::cout << row.classifier << " auc=" << *row.auc << '\n';
    } else {
      std::cout << row.classifier << " failed: " << row.error << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative spectrum sensing with SVM ensembles"};
  app.require_subcommand(1);

  CommonFlags gen_flags, train_flags, eval_flags, run_flags, sweep_flags;
  auto* gen = app.add_subcommand("generate", "write train/test datasets");
  add_common(gen, gen_flags);

  auto* train = app.add_subcommand("train", "train all configured classifiers on a dataset");
  add_common(train, train_flags);
  std::string train_csv;
  train->add_option("--data", train_csv, "training CSV")->required()->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "score a test dataset with trained models");
  add_common(eval, eval_flags);
  std::string models_dir, test_csv;
  eval->add_option("--models", models_dir, "models directory written by train")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--test", test_csv, "test CSV")->required()->check(CLI::ExistingFile);

  auto* run = app.add_subcommand("run", "generate, train and evaluate");
  add_common(run, run_flags);

  auto* sweep = app.add_subcommand("sweep", "run once per value of one parameter");
  add_common(sweep, sweep_flags);
  std::string axis;
  std::vector<double> values;
  sweep->add_option("--axis", axis, "sample_size, snr_db, num_sus or train_size")->required();
  sweep->add_option("--values", values, "axis values")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("usage", "", e.what());
    return 2;
  }

  try {
    if (gen->parsed()) {
      const auto config = resolve(gen_flags);
      ex::generate_command(config, config.output_dir);
    } else if (train->parsed()) {
      const auto config = resolve(train_flags);
      ex::train_command(config, train_csv, config.output_dir);
    } else if (eval->parsed()) {
      const auto config = resolve(eval_flags);
      return print_summary(ex::eval_command(config, models_dir, test_csv, config.output_dir));
    } else if (run->parsed()) {
      const auto config = resolve(run_flags);
      return print_summary(ex::run(config, config.output_dir));
    } else if (sweep->parsed()) {
      const auto config = resolve(sweep_flags);
      const auto entries = ex::sweep(config, ex::parse_axis(axis), values, config.output_dir);
      for (const auto& entry : entries) {
        for (const auto& row : entry.result.rows) {
          std::cout << ex::axis_name(ex::parse_axis(axis)) << '=' << entry.value << ' ' << row.classifier;
          if (row.auc) {
            std::cout << " auc=" << *row.auc << '\n';
          } else {
            std::cout << " failed\n";
          }
        }
      }
    }
  } catch (const ex::ConfigError& e) {
    report("config", e.key(), e.message());
    return 3;
  } catch (const coopsense::svm::TrainingError& e) {
    report("training", "", e.what());
    return 4;
  } catch (const coopsense::numerics::TruncationError& e) {
    report("numerics", "", e.what());
    return 5;
  } catch (const std::exception& e) {
    report("runtime", "", e.what());
    return 1;
  }
  return 0;
}
