#include "coopsense/sensing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coopsense::sensing {

void SensingConfig::validate() const {
  if (num_samples < 1) throw std::invalid_argument("sensing.M must be >= 1");
  if (num_sus < 1) throw std::invalid_argument("sensing.N must be >= 1");
  if (!(prior_h1 >= 0.0 && prior_h1 <= 1.0)) throw std::invalid_argument("sensing.prior_h1 must be in [0, 1]");
  fading.validate();
}

std::size_t Dataset::dimension() const {
  if (rows.empty()) throw std::invalid_argument("dataset is empty");
  const std::size_t dim = rows.front().energies.size();
  for (const auto& row : rows) {
    if (row.energies.size() != dim) throw std::invalid_argument("dataset rows have mixed dimensions");
  }
  return dim;
}

bool Dataset::has_both_labels() const {
  bool pos = false;
  bool neg = false;
  for (const auto& row : rows) (row.label > 0 ? pos : neg) = true;
  return pos && neg;
}

double energy_statistic(std::span<const std::complex<double>> samples) {
  if (samples.empty()) throw std::domain_error("energy_statistic: no samples");
  double sum = 0.0;
  for (const auto& z : samples) sum += std::norm(z);
  return sum / static_cast<double>(samples.size());
}

EventSimulator::EventSimulator(SensingConfig config) : config_(std::move(config)) {
  config_.validate();
  sampler_ = std::make_shared<const numerics::QuantileTable>(channel::make_snr_sampler(config_.fading));
}

EventSimulator::EventSimulator(SensingConfig config, double per_sample_snr)
    : config_(std::move(config)), fixed_snr_(per_sample_snr) {
  config_.validate();
  if (!(per_sample_snr >= 0.0)) throw std::invalid_argument("fixed SNR must be >= 0");
}

EventSimulator EventSimulator::with_fixed_snr(SensingConfig config, double per_sample_snr) {
  return EventSimulator(std::move(config), per_sample_snr);
}

EnergyVector EventSimulator::simulate(Hypothesis hypothesis, RngStream& rng) const {
  const std::size_t m = config_.num_samples;
  std::normal_distribution<double> noise(0.0, std::sqrt(0.5));
  std::vector<std::complex<double>> z(m);

  EnergyVector out;
  out.label = label_of(hypothesis);
  out.energies.resize(config_.num_sus);
  for (auto& energy : out.energies) {
    std::complex<double> pu{0.0, 0.0};
    if (hypothesis == Hypothesis::kPresent) {
      const double snr = fixed_snr_ ? *fixed_snr_ : sampler_->quantile(uniform_open(rng));
      const double phase = 2.0 * std::numbers::pi * uniform_open(rng);
      pu = std::polar(std::sqrt(snr), phase);
    }
    for (auto& sample : z) {
      const double re = noise(rng);
      const double im = noise(rng);
      sample = pu + std::complex<double>(re, im);
    }
    energy = energy_statistic(z);
  }
  return out;
}

EnergyVector EventSimulator::simulate_event(RngStream& rng) const {
  const bool present = uniform_open(rng) < config_.prior_h1;
  return simulate(present ? Hypothesis::kPresent : Hypothesis::kAbsent, rng);
}

namespace {

Dataset empty_dataset(const EventSimulator& simulator, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::domain_error("generate_dataset: L must be >= 1");
  Dataset data;
  data.config = simulator.config();
  data.seed = seed;
  data.rows.resize(count);
  return data;
}

}  // namespace

Dataset generate_dataset(const EventSimulator& simulator, std::size_t count, std::uint64_t seed) {
  Dataset data = empty_dataset(simulator, count, seed);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    RngStream rng = substream(seed, static_cast<std::uint64_t>(i));
    data.rows[static_cast<std::size_t>(i)] = simulator.simulate_event(rng);
  }
  return data;
}

Dataset generate_dataset(const SensingConfig& config, std::size_t count, std::uint64_t seed) {
  return generate_dataset(EventSimulator(config), count, seed);
}

Dataset generate_dataset_serial(const EventSimulator& simulator, std::size_t count, std::uint64_t seed) {
  Dataset data = empty_dataset(simulator, count, seed);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng = substream(seed, i);
    data.rows[i] = simulator.simulate_event(rng);
  }
  return data;
}

EdPerformance analytic_ed_performance(std::size_t n, double gamma, double tau) {
  if (n < 1) throw std::domain_error("analytic_ed_performance: n must be >= 1");
  if (!(gamma >= 0.0) || !(tau >= 0.0)) throw std::domain_error("analytic_ed_performance: gamma, tau must be >= 0");
  const double dof = static_cast<double>(n);
  const double pfa = numerics::reg_gamma_upper(dof, 0.5 * tau);
  const double pd = gamma == 0.0 ? pfa : numerics::marcum_q(dof, std::sqrt(2.0 * gamma), std::sqrt(tau));
  return {pd, pfa};
}

}  // namespace coopsense::sensing
