#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner. None of these call into the library's numerics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

/// Integral of f over [a, b] by adaptive 61-point Gauss-Kronrod.
inline double quad(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-12, &err);
}

/// Mass of a positive density on [lo, hi], integrated in log(x) on pieces.
inline double log_mass(const std::function<double(double)>& pdf, double lo, double hi, int pieces = 64) {
  const double a = std::log(lo);
  const double b = std::log(hi);
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double t0 = a + (b - a) * k / pieces;
    const double t1 = a + (b - a) * (k + 1) / pieces;
    total += quad([&](double t) { return pdf(std::exp(t)) * std::exp(t); }, t0, t1);
  }
  return total;
}

/// Rician SNR density with Rice factor k and mean gamma_bar.
inline double rician_snr_pdf(double k, double gamma_bar, double g) {
  const double r = g / gamma_bar;
  return (1.0 + k) * std::exp(-k) / gamma_bar * std::exp(-(1.0 + k) * r) *
         boost::math::cyl_bessel_i(0.0, 2.0 * std::sqrt(k * (1.0 + k) * r));
}

/// Nakagami-m SNR density: gamma law with shape m and mean gamma_bar.
inline double nakagami_snr_pdf(double m, double gamma_bar, double g) {
  return std::exp(m * std::log(m / gamma_bar) + (m - 1.0) * std::log(g) - m * g / gamma_bar - std::lgamma(m));
}

/// Tabulated CDF of a density on a geometric grid, each cell integrated by
/// Gauss-Kronrod. Evaluation interpolates linearly in log(x).
class CdfOracle {
 public:
  CdfOracle(const std::function<double(double)>& pdf, double lo, double hi, int cells = 4000)
      : log_lo_(std::log(lo)), log_hi_(std::log(hi)), values_(cells + 1, 0.0) {
    // Mass below lo, integrated down to lo * e^-60.
    values_[0] = log_mass(pdf, lo * std::exp(-60.0), lo, 16);
    for (int c = 0; c < cells; ++c) {
      const double t0 = log_lo_ + (log_hi_ - log_lo_) * c / cells;
      const double t1 = log_lo_ + (log_hi_ - log_lo_) * (c + 1) / cells;
      values_[c + 1] = values_[c] + quad([&](double t) { return pdf(std::exp(t)) * std::exp(t); }, t0, t1);
    }
  }

  double operator()(double x) const {
    if (x <= 0) return 0.0;
    const double t = std::log(x);
    if (t <= log_lo_) return values_.front();
    if (t >= log_hi_) return values_.back();
    const double pos = (t - log_lo_) / (log_hi_ - log_lo_) * static_cast<double>(values_.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[std::min(i + 1, values_.size() - 1)] - values_[i]);
  }

  double total() const { return values_.back(); }

 private:
  double log_lo_, log_hi_;
  std::vector<double> values_;
};

/// Two-sided KS statistic of a sample against a CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
  }
  return d;
}

/// P[Binomial(n, p) >= k].
inline double binomial_upper(std::size_t n, std::size_t k, double p) {
  double total = 0.0;
  for (std::size_t j = k; j <= n; ++j) {
    total += boost::math::binomial_coefficient<double>(static_cast<unsigned>(n), static_cast<unsigned>(j)) *
             std::pow(p, static_cast<double>(j)) * std::pow(1.0 - p, static_cast<double>(n - j));
  }
  return total;
}

/// Mann-Whitney statistic: fraction of (positive, negative) pairs ordered
/// correctly, ties counted one half. Quadratic on purpose.
inline double mann_whitney(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] <= 0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] > 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

/// Projection onto {0 <= a <= theta, sum y a = 0} by bisection on the
/// multiplier of the equality constraint.
inline std::vector<double> project_box_hyperplane(const std::vector<double>& v, std::span<const int> y, double theta) {
  auto at = [&](double lambda) {
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::clamp(v[i] - lambda * y[i], 0.0, theta);
    return a;
  };
  auto residual = [&](double lambda) {
    const auto a = at(lambda);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += y[i] * a[i];
    return s;
  };
  double bound = theta + 1.0;
  for (double x : v) bound = std::max(bound, std::abs(x) + theta + 1.0);
  double lo = -bound, hi = bound;  // residual is nonincreasing in lambda
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0 ? lo : hi) = mid;
  }
  return at(0.5 * (lo + hi));
}

struct QpSolution {
  std::vector<double> alpha;
  double objective = 0.0;
};

/// Accelerated projected-gradient ascent on the SVM dual for a small Gram
/// matrix q (row-major, n x n, unsigned kernel values).
inline QpSolution svm_dual_oracle(const std::vector<double>& gram, std::span<const int> y, double theta,
                                  int iterations = 50000) {
  const std::size_t n = y.size();
  auto objective = [&](const std::vector<double>& a) {
    double lin = 0.0, quad_term = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lin += a[i];
      for (std::size_t j = 0; j < n; ++j) quad_term += a[i] * a[j] * y[i] * y[j] * gram[i * n + j];
    }
    return lin - 0.5 * quad_term;
  };
  double lipschitz = 0.0;  // Frobenius bound on the Hessian norm
  for (double g : gram) lipschitz += g * g;
  lipschitz = std::sqrt(lipschitz) + 1e-12;
  const double step = 1.0 / lipschitz;

  // Projected gradient step from x.
  auto advance = [&](const std::vector<double>& x) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += y[i] * y[j] * gram[i * n + j] * x[j];
      v[i] = x[i] + step * (1.0 - s);
    }
    return project_box_hyperplane(v, y, theta);
  };

  std::vector<double> a(n, 0.0), prev = a, z = a;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    prev = a;
    a = advance(z);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    // Restart momentum whenever the objective drops.
    if (objective(a) < objective(prev)) {
      t = 1.0;
      z = a;
      continue;
    }
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = a[i] + (t - 1.0) / t_next * (a[i] - prev[i]);
      moved = std::max(moved, std::abs(a[i] - prev[i]));
    }
    t = t_next;
    if (moved < 1e-14 && it > 100) {
      // Momentum can land twice on the same clamped vertex; stop only at a
      // fixed point of the plain step.
      double drift = 0.0;
      const auto plain = advance(a);
      for (std::size_t i = 0; i < n; ++i) drift = std::max(drift, std::abs(plain[i] - a[i]));
      if (drift < 1e-14) break;
      t = 1.0;
      z = a;
    }
  }
  return {a, objective(a)};
}

}  // namespace oracle
