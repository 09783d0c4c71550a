#pragma once

// Special functions and quadrature used by the fading and detector models.
// Every tail function works in log space internally and clamps its public
// result to [0, 1].

#include <functional>
#include <stdexcept>
#include <vector>

namespace coopsense::numerics {

/// Raised when a tabulated density loses more than the allowed mass.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ln I_order(x) for order >= 0 and x >= 0.
double log_besseli(double order, double x);

namespace detail {
// Same as log_besseli but accepts any order > -1, as needed by the
// alpha-kappa-mu density with mu < 1. The power series stays positive there.
double log_besseli_unchecked(double order, double x);
}  // namespace detail

/// Regularized upper incomplete gamma Q(shape, x) = Gamma(shape, x) / Gamma(shape).
double reg_gamma_upper(double shape, double x);

/// Regularized lower incomplete gamma P(shape, x) = 1 - Q(shape, x).
double reg_gamma_lower(double shape, double x);

/// Generalized Marcum Q function Q_m(a, b), the upper tail at b^2 of a
/// noncentral chi-square with 2m degrees of freedom and noncentrality a^2.
double marcum_q(double m, double a, double b);

/// Monotone piecewise-linear CDF over a strictly increasing grid. Immutable.
class QuantileTable {
 public:
  QuantileTable(std::vector<double> grid, std::vector<double> cdf);

  double quantile(double u) const;
  double cdf(double x) const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& cdf_values() const { return cdf_; }
  double lo() const { return grid_.front(); }
  double hi() const { return grid_.back(); }

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

/// Tabulates the CDF of `pdf` on a geometric grid over [lo, hi] by the
/// composite trapezoid rule and renormalizes it to end at exactly 1. When
/// lo == 0 the grid starts at 0 and continues geometrically from hi * 1e-9.
/// Throws TruncationError if the captured mass is outside 1 +/- 1e-4.
QuantileTable build_quantile_table(const std::function<double(double)>& pdf, double lo,
                                   double hi, std::size_t points);

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-13, double rel_tol = 1e-12);

}  // namespace coopsense::numerics
