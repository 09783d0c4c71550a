#include "coopsense/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace coopsense::numerics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Power series sum_k (x/2)^(2k+v) / (k! Gamma(k+v+1)), accumulated relative to
// the first term and rescaled whenever the running sum grows too large.
double log_besseli_series(double order, double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  double log_offset = order * std::log(half) - std::lgamma(order + 1.0);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 1000000; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + order));
    sum += term;
    if (sum > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      log_offset += 280.0 * std::numbers::ln10;
    }
    // Terms grow until k ~ x/2, then decay geometrically.
    if (k + 1.0 > half && term < 1e-17 * sum) break;
  }
  return log_offset + std::log(sum);
}

// Hankel expansion I_v(x) ~ e^x / sqrt(2 pi x) * sum (-1)^k a_k(v) / x^k.
double log_besseli_asymptotic(double order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

// ln of x^a e^-x / Gamma(a + 1), the increment between Q(a, x) and Q(a + 1, x).
double log_gamma_step(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a + 1.0);
}

struct GammaPair {
  double lower;
  double upper;
};

GammaPair reg_gamma(double a, double x) {
  if (x == 0.0) return {0.0, 1.0};
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Series for P(a, x).
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 1000000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    const double p = std::clamp(std::exp(std::log(sum) + log_prefix), 0.0, 1.0);
    return {p, 1.0 - p};
  }
  // Modified Lentz continued fraction for Q(a, x).
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double q = std::clamp(std::exp(std::log(h) + log_prefix), 0.0, 1.0);
  return {1.0 - q, q};
}

}  // namespace

namespace detail {

double log_besseli_unchecked(double order, double x) {
  if (x == 0.0) return order == 0.0 ? 0.0 : (order > 0.0 ? kNegInf : std::numeric_limits<double>::infinity());
  if (x > 30.0 && x > 2.0 * order * order) return log_besseli_asymptotic(order, x);
  return log_besseli_series(order, x);
}

}  // namespace detail

double log_besseli(double order, double x) {
  if (!(order >= 0.0) || !(x >= 0.0)) {
    throw std::domain_error("log_besseli: order and argument must be nonnegative");
  }
  return detail::log_besseli_unchecked(order, x);
}

double reg_gamma_upper(double shape, double x) {
  if (!(shape > 0.0)) throw std::domain_error("reg_gamma_upper: shape must be positive");
  if (!(x >= 0.0)) throw std::domain_error("reg_gamma_upper: x must be nonnegative");
  return reg_gamma(shape, x).upper;
}

double reg_gamma_lower(double shape, double x) {
  if (!(shape > 0.0)) throw std::domain_error("reg_gamma_lower: shape must be positive");
  if (!(x >= 0.0)) throw std::domain_error("reg_gamma_lower: x must be nonnegative");
  return reg_gamma(shape, x).lower;
}

double marcum_q(double m, double a, double b) {
  if (!(m >= 1.0)) throw std::domain_error("marcum_q: order m must be >= 1");
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::domain_error("marcum_q: a and b must be nonnegative");
  if (b == 0.0) return 1.0;
  const double x = 0.5 * b * b;
  const double h = 0.5 * a * a;
  if (h == 0.0) return reg_gamma_upper(m, x);

  // Poisson(h)-weighted sum of Q(m + k, x), walked outward from the Poisson
  // mode so that no weight underflows before it matters.
  constexpr double kTermFloor = 1e-14;
  constexpr long kTermCap = 1000000;
  const double log_h = std::log(h);
  const long mode = static_cast<long>(std::floor(h));
  auto log_weight = [&](long k) { return -h + k * log_h - std::lgamma(k + 1.0); };

  const double q_mode = reg_gamma_upper(m + mode, x);
  double total = std::exp(log_weight(mode)) * q_mode;
  long terms = 1;

  // Forward: Q(a + 1, x) = Q(a, x) + x^a e^-x / Gamma(a + 1).
  double q = q_mode;
  for (long k = mode + 1; terms < kTermCap; ++k, ++terms) {
    q = std::min(1.0, q + std::exp(log_gamma_step(m + k - 1, x)));
    const double w = std::exp(log_weight(k));
    total += w * q;
    if (w < kTermFloor) break;
  }
  // Backward: Q(a - 1, x) = Q(a, x) - x^(a-1) e^-x / Gamma(a).
  q = q_mode;
  for (long k = mode - 1; k >= 0 && terms < kTermCap; --k, ++terms) {
    q = std::max(0.0, q - std::exp(log_gamma_step(m + k, x)));
    const double w = std::exp(log_weight(k));
    total += w * q;
    if (w < kTermFloor) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

QuantileTable::QuantileTable(std::vector<double> grid, std::vector<double> cdf)
    : grid_(std::move(grid)), cdf_(std::move(cdf)) {
  if (grid_.size() < 2 || grid_.size() != cdf_.size()) {
    throw std::invalid_argument("QuantileTable: grid and cdf must have equal length >= 2");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw std::invalid_argument("QuantileTable: grid not strictly increasing");
    if (cdf_[i] < cdf_[i - 1]) throw std::invalid_argument("QuantileTable: cdf decreasing");
  }
  if (cdf_.front() > 1e-6 || cdf_.back() < 1.0 - 1e-6) {
    throw std::invalid_argument("QuantileTable: cdf must span [0, 1]");
  }
}

double QuantileTable::quantile(double u) const {
  if (u <= 0.0) return grid_.front();
  if (u >= 1.0) return grid_.back();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cdf_.begin(), 1));
  if (i >= cdf_.size()) return grid_.back();
  const double c0 = cdf_[i - 1];
  const double c1 = cdf_[i];
  if (c1 <= c0) return grid_[i];
  const double t = (u - c0) / (c1 - c0);
  return grid_[i - 1] + t * (grid_[i] - grid_[i - 1]);
}

double QuantileTable::cdf(double x) const {
  if (x <= grid_.front()) return cdf_.front();
  if (x >= grid_.back()) return cdf_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const auto i = static_cast<std::size_t>(it - grid_.begin());
  const double t = (x - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
  return cdf_[i - 1] + t * (cdf_[i] - cdf_[i - 1]);
}

QuantileTable build_quantile_table(const std::function<double(double)>& pdf, double lo, double hi,
                                   std::size_t points) {
  if (points < 256) throw std::domain_error("build_quantile_table: need at least 256 points");
  if (!(lo >= 0.0) || !(hi > lo)) throw std::domain_error("build_quantile_table: need 0 <= lo < hi");

  std::vector<double> grid(points);
  if (lo > 0.0) {
    const double ratio = std::log(hi / lo);
    for (std::size_t i = 0; i < points; ++i) {
      grid[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(points - 1));
    }
  } else {
    const double start = hi * 1e-9;
    const double ratio = std::log(hi / start);
    grid[0] = 0.0;
    for (std::size_t i = 1; i < points; ++i) {
      grid[i] = start * std::exp(ratio * static_cast<double>(i - 1) / static_cast<double>(points - 2));
    }
  }
  grid.back() = hi;

  std::vector<double> density(points);
  for (std::size_t i = 0; i < points; ++i) {
    density[i] = pdf(grid[i]);
    if (!(density[i] >= 0.0) || !std::isfinite(density[i])) {
      throw std::domain_error("build_quantile_table: pdf must be finite and nonnegative");
    }
  }
  std::vector<double> cdf(points, 0.0);
  for (std::size_t i = 1; i < points; ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  }
  const double mass = cdf.back();
  if (std::abs(mass - 1.0) > 1e-4) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "build_quantile_table: captured mass " << mass << " on [" << lo << ", " << hi
        << "] is outside 1 +/- 1e-4; widen the domain";
    throw TruncationError(msg.str());
  }
  for (auto& c : cdf) c /= mass;
  cdf.back() = 1.0;
  return QuantileTable(std::move(grid), std::move(cdf));
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double integral;
  double error;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

double integrate_recursive(const std::function<double(double)>& f, double a, double b, Panel whole,
                           double tol, int depth) {
  if (whole.error <= tol || depth >= 50) return whole.integral;
  const double mid = 0.5 * (a + b);
  const Panel left = gauss_kronrod(f, a, mid);
  const Panel right = gauss_kronrod(f, mid, b);
  if (std::abs(left.integral + right.integral - whole.integral) <= 1e-3 * tol &&
      left.error + right.error <= tol) {
    return left.integral + right.integral;
  }
  return integrate_recursive(f, a, mid, left, 0.5 * tol, depth + 1) +
         integrate_recursive(f, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, abs_tol, rel_tol);
  const Panel whole = gauss_kronrod(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole.integral));
  return integrate_recursive(f, a, b, whole, tol, 0);
}

}  // namespace coopsense::numerics
