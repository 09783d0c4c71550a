#include "coopsense/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coopsense::channel {

void FadingParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("fading.alpha must be > 0");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("fading.kappa must be >= 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("fading.mu must be > 0");
  if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar)) {
    throw std::invalid_argument("fading.gamma_bar must be > 0");
  }
}

std::string FadingParams::describe() const {
  std::ostringstream out;
  out.precision(6);
  out << "alpha=" << alpha << " kappa=" << kappa << " mu=" << mu << " gamma_bar=" << gamma_bar;
  return out.str();
}

double log_snr_pdf(const FadingParams& p, double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("snr_pdf: gamma must be > 0");
  const double ratio = gamma / p.gamma_bar;
  const double log_ratio = std::log(ratio);
  const double mu = p.mu;
  const double alpha = p.alpha;
  const double kappa = p.kappa;

  double log_f = std::log(0.5 * mu * alpha) + 0.5 * (1.0 + mu) * std::log1p(kappa) - std::log(p.gamma_bar) +
                 (0.25 * alpha * (1.0 + mu) - 1.0) * log_ratio - mu * kappa -
                 mu * (1.0 + kappa) * std::exp(0.5 * alpha * log_ratio);

  if (kappa < kKappaLimit) {
    // kappa^((1-mu)/2) * I_{mu-1}(z) with I replaced by (z/2)^(mu-1) / Gamma(mu).
    log_f += (mu - 1.0) * std::log(mu) + 0.5 * (mu - 1.0) * std::log1p(kappa) +
             0.25 * alpha * (mu - 1.0) * log_ratio - std::lgamma(mu);
  } else {
    const double z = 2.0 * mu * std::sqrt(kappa * (1.0 + kappa)) * std::exp(0.25 * alpha * log_ratio);
    log_f += 0.5 * (1.0 - mu) * std::log(kappa) + numerics::detail::log_besseli_unchecked(mu - 1.0, z);
  }
  return log_f;
}

double snr_pdf(const FadingParams& params, double gamma) { return std::exp(log_snr_pdf(params, gamma)); }

namespace {

// Mass between exp(a) and exp(b), integrated in u = log(gamma).
double log_domain_mass(const FadingParams& params, double a, double b) {
  const auto integrand = [&](double u) { return std::exp(log_snr_pdf(params, std::exp(u)) + u); };
  // Split at the mean so the adaptive rule sees the peak.
  const double c = std::clamp(std::log(params.gamma_bar), a, b);
  return numerics::integrate(integrand, a, c, 1e-14) + numerics::integrate(integrand, c, b, 1e-14);
}

}  // namespace

double snr_mass(const FadingParams& params, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::domain_error("snr_mass: need 0 < lo < hi");
  return log_domain_mass(params, std::log(lo), std::log(hi));
}

numerics::QuantileTable make_snr_sampler(const FadingParams& params) {
  params.validate();
  constexpr double kLostMass = 1e-6;
  const double gbar = params.gamma_bar;

  double lo = gbar * 1e-8;
  for (int i = 0; i < 60 && log_domain_mass(params, std::max(std::log(lo) - 700.0, -700.0), std::log(lo)) > 0.1 * kLostMass; ++i) lo *= 1e-4;

  double hi = 50.0 * gbar;
  double captured = snr_mass(params, lo, hi);
  for (int i = 0; i < 40 && captured < 1.0 - kLostMass; ++i) {
    hi *= 2.0;
    captured = snr_mass(params, lo, hi);
  }
  if (captured < 1.0 - kLostMass) {
    throw std::runtime_error("make_snr_sampler: cannot capture SNR mass for " + params.describe());
  }

  const double decades = std::log10(hi / lo);
  const auto points = static_cast<std::size_t>(std::max(8192.0, 400.0 * decades));
  return numerics::build_quantile_table([&](double g) { return snr_pdf(params, g); }, lo, hi, points);
}

std::vector<double> sample_snr(const numerics::QuantileTable& table, RngStream& rng, std::size_t count) {
  std::vector<double> out(count);
  for (auto& v : out) v = table.quantile(uniform_open(rng));
  return out;
}

}  // namespace coopsense::channel
