#pragma once

// Energy detection at each secondary user, H0/H1 event simulation and the
// labeled energy-vector datasets assembled at the fusion center.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coopsense/channel.hpp"
#include "coopsense/numerics.hpp"
#include "coopsense/random.hpp"

namespace coopsense::sensing {

enum class Hypothesis { kAbsent, kPresent };  // H0, H1

inline int label_of(Hypothesis h) { return h == Hypothesis::kPresent ? 1 : -1; }

struct SensingConfig {
  std::size_t num_samples = 1;  // M, equal to the time-bandwidth product n
  std::size_t num_sus = 3;      // N
  double prior_h1 = 0.5;
  channel::FadingParams fading;

  void validate() const;
};

struct EnergyVector {
  std::vector<double> energies;  // Y_1 .. Y_N
  int label = -1;                // +1 PU present, -1 absent

  bool operator==(const EnergyVector&) const = default;
};

struct Dataset {
  std::vector<EnergyVector> rows;
  SensingConfig config;
  std::uint64_t seed = 0;

  std::size_t size() const { return rows.size(); }
  /// Row dimension; throws if rows disagree or the dataset is empty.
  std::size_t dimension() const;
  bool has_both_labels() const;
};

/// Y = (1/M) sum |z_i|^2. Throws std::domain_error on an empty sequence.
double energy_statistic(std::span<const std::complex<double>> samples);

/// Draws one sensing event for every SU.
///
/// Noise samples are circular complex Gaussian with unit power. Under H1 each
/// SU draws its SNR gamma_n (per sample, relative to the noise power) and the
/// PU component has constant modulus sqrt(gamma_n) with one uniform phase per
/// event, so the detector statistic 2 M Y is noncentral chi-square with 2M
/// degrees of freedom and noncentrality 2 M gamma_n.
class EventSimulator {
 public:
  explicit EventSimulator(SensingConfig config);

  /// Degenerate fading: every SU sees the same per-sample SNR.
  static EventSimulator with_fixed_snr(SensingConfig config, double per_sample_snr);

  EnergyVector simulate(Hypothesis hypothesis, RngStream& rng) const;

  /// Draws the hypothesis from the prior, then simulates.
  EnergyVector simulate_event(RngStream& rng) const;

  const SensingConfig& config() const { return config_; }

 private:
  EventSimulator(SensingConfig config, double per_sample_snr);

  SensingConfig config_;
  std::shared_ptr<const numerics::QuantileTable> sampler_;
  std::optional<double> fixed_snr_;
};

/// L events, event i drawn from substream i of `seed`. Events are generated
/// in parallel; the result does not depend on the thread count.
Dataset generate_dataset(const EventSimulator& simulator, std::size_t count, std::uint64_t seed);
Dataset generate_dataset(const SensingConfig& config, std::size_t count, std::uint64_t seed);

/// Single-threaded reference for generate_dataset.
Dataset generate_dataset_serial(const EventSimulator& simulator, std::size_t count, std::uint64_t seed);

struct EdPerformance {
  double pd;
  double pfa;
};

/// Detection and false-alarm probability of thresholding y = 2 M Y at tau,
/// with n = M and gamma the aggregate SNR over the sensing window (M times the
/// per-sample SNR).
EdPerformance analytic_ed_performance(std::size_t n, double gamma, double tau);

// CSV with header y_1,...,y_N,label and a key=value sidecar.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_meta(std::ostream& out, const Dataset& data);
void save_dataset(const std::string& csv_path, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);
/// Loads `csv_path` and, if present, `csv_path` + ".meta".
Dataset load_dataset(const std::string& csv_path);

}  // namespace coopsense::sensing
