// Serial references vs OpenMP kernels. Set OMP_NUM_THREADS to vary the team.

#include <benchmark/benchmark.h>

#include "coopsense/kernels.hpp"
#include "coopsense/sensing.hpp"
#include "coopsense/svm.hpp"

using namespace coopsense;

namespace {

sensing::SensingConfig scenario() {
  sensing::SensingConfig c;
  c.num_samples = 2;
  c.num_sus = 3;
  c.fading = {2, 2, 2, 1};
  return c;
}

svm::FeatureMatrix features(std::size_t rows) {
  return svm::to_matrix(sensing::generate_dataset(scenario(), rows, 5));
}

const svm::SvmModel& trained_rbf() {
  static const svm::SvmModel model = svm::train_smo(sensing::generate_dataset(scenario(), 1500, 9),
                                                    svm::KernelSpec::rbf(1.0));
  return model;
}

template <auto Gram>
void gram(benchmark::State& state) {
  const auto x = features(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Gram(svm::KernelSpec::rbf(1.0), x));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Decide>
void decisions(benchmark::State& state) {
  const auto& model = trained_rbf();
  const auto x = features(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Decide(model, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Generate>
void generation(benchmark::State& state) {
  auto config = scenario();
  config.num_samples = state.range(0);
  const sensing::EventSimulator sim(config);
  for (auto _ : state) benchmark::DoNotOptimize(Generate(sim, 2000, 3));
  state.SetItemsProcessed(state.iterations() * 2000);
}

sensing::Dataset generate_parallel(const sensing::EventSimulator& sim, std::size_t n, std::uint64_t seed) {
  return sensing::generate_dataset(sim, n, seed);
}

}  // namespace

BENCHMARK(gram<svm::gram_matrix_serial>)->Name("gram_matrix/serial")->Arg(500)->Arg(2000);
BENCHMARK(gram<svm::gram_matrix>)->Name("gram_matrix/openmp")->Arg(500)->Arg(2000);
BENCHMARK(decisions<svm::decision_values_serial>)->Name("decision_values/serial")->Arg(4000);
BENCHMARK(decisions<svm::decision_values>)->Name("decision_values/openmp")->Arg(4000);
BENCHMARK(generation<sensing::generate_dataset_serial>)->Name("generate_dataset/serial")->Arg(2)->Arg(500);
BENCHMARK(generation<generate_parallel>)->Name("generate_dataset/openmp")->Arg(2)->Arg(500);

BENCHMARK_MAIN();
