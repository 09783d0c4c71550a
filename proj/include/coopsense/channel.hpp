#pragma once

// alpha-kappa-mu fading: SNR density, special-case reductions and
// inverse-transform sampling of the instantaneous SNR.

#include <cstddef>
#include <string>
#include <vector>

#include "coopsense/numerics.hpp"
#include "coopsense/random.hpp"

namespace coopsense::channel {

/// Below this kappa the density switches to its analytic kappa -> 0 limit.
inline constexpr double kKappaLimit = 1e-6;

struct FadingParams {
  double alpha = 2.0;      // non-linearity exponent, > 0
  double kappa = 0.0;      // dominant-to-scattered power ratio, >= 0
  double mu = 1.0;         // cluster parameter, > 0
  double gamma_bar = 1.0;  // average SNR, linear scale, > 0

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
  std::string describe() const;
};

/// Natural log of the SNR density at gamma > 0.
double log_snr_pdf(const FadingParams& params, double gamma);

/// SNR density at gamma > 0. Throws std::domain_error for gamma <= 0.
double snr_pdf(const FadingParams& params, double gamma);

/// Probability mass of the SNR law on [lo, hi], integrated in log(gamma).
double snr_mass(const FadingParams& params, double lo, double hi);

/// Inverse-transform table for the SNR law. The lower edge starts at
/// gamma_bar * 1e-8 and the upper edge at 50 gamma_bar; both are widened
/// until the captured mass is at least 1 - 1e-6.
numerics::QuantileTable make_snr_sampler(const FadingParams& params);

/// `count` i.i.d. draws from the table.
std::vector<double> sample_snr(const numerics::QuantileTable& table, RngStream& rng, std::size_t count);

}  // namespace coopsense::channel
