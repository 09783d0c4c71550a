#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "coopsense/numerics.hpp"

using namespace coopsense::numerics;

namespace {

// Direct summation of the defining power series in long double.
long double besseli_series(long double order, long double x) {
  long double sum = 0.0L;
  for (int k = 0; k < 200; ++k) {
    const long double log_term =
        (2.0L * k + order) * std::log(x / 2.0L) - std::lgamma(k + 1.0L) - std::lgamma(k + order + 1.0L);
    sum += std::exp(log_term);
  }
  return sum;
}

double log_besseli_half(double x) {
  // I_{1/2}(x) = sqrt(2/(pi x)) sinh x
  return 0.5 * std::log(2.0 / (std::numbers::pi * x)) + x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

// Poisson mixture of central gamma tails, summed in long double.
double marcum_poisson(int m, double a, double b) {
  const long double lambda = 0.5L * a * a;
  long double total = 0.0L;
  for (int k = 0; k < 400; ++k) {
    const long double w = std::exp(-lambda + k * std::log(lambda > 0 ? lambda : 1.0L) - std::lgamma(k + 1.0L));
    if (lambda == 0 && k > 0) break;
    total += w * boost::math::gamma_q(static_cast<long double>(m + k), 0.5L * b * b);
  }
  return static_cast<double>(total);
}

}  // namespace

TEST_CASE("log_besseli spot values") {
  CHECK(log_besseli(0, 0) == doctest::Approx(0.0));
  CHECK(log_besseli(0, 1) == doctest::Approx(std::log(1.2660658777520082)).epsilon(1e-12));
  CHECK(log_besseli(0.5, 1) == doctest::Approx(std::log(0.9376748882454876)).epsilon(1e-12));
  CHECK(std::isinf(log_besseli(1, 0)));
  CHECK_THROWS_AS(log_besseli(-1, 1), std::domain_error);
  CHECK_THROWS_AS(log_besseli(0, -1), std::domain_error);
}

TEST_CASE("log_besseli matches the power series on [0, 20]") {
  for (double order : {0.0, 0.5, 1.0, 3.0}) {
    for (double x = 0.05; x <= 20.0; x += 0.35) {
      const double want = static_cast<double>(besseli_series(order, x));
      const double got = std::exp(log_besseli(order, x));
      CHECK(std::abs(got - want) <= 1e-10 * want);
    }
  }
}

TEST_CASE("log_besseli large arguments") {
  for (double x : {25.0, 40.0, 80.0, 150.0, 400.0, 700.0}) {
    CHECK(std::abs(log_besseli(0.5, x) - log_besseli_half(x)) <= 1e-10 * std::max(1.0, x) + 1e-12);
  }
  // Beyond the half-order identity: compare against boost where it does not overflow.
  for (double order : {0.0, 1.0, 2.5, 7.0}) {
    for (double x : {31.0, 60.0, 200.0, 600.0}) {
      const double want = std::log(boost::math::cyl_bessel_i(order, x));
      CHECK(std::abs(log_besseli(order, x) - want) <= 1e-10 * std::abs(want));
    }
  }
}

TEST_CASE("log_besseli accepts orders in (-1, 0) through the unchecked path") {
  for (double order : {-0.5, -0.25}) {
    for (double x : {0.3, 2.0, 9.0, 45.0}) {
      const double want = std::log(boost::math::cyl_bessel_i(order, x));
      CHECK(detail::log_besseli_unchecked(order, x) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("regularized incomplete gamma") {
  CHECK(reg_gamma_upper(3, 0) == 1.0);
  CHECK(reg_gamma_upper(1, 0.5) == doctest::Approx(0.6065306597126334).epsilon(1e-13));
  CHECK(reg_gamma_upper(2, 2) == doctest::Approx(0.4060058497098381).epsilon(1e-13));
  CHECK_THROWS_AS(reg_gamma_upper(0, 1), std::domain_error);
  CHECK_THROWS_AS(reg_gamma_upper(1, -1), std::domain_error);

  for (double shape : {0.5, 1.0, 2.0, 5.5, 30.0, 200.0}) {
    double previous = 1.0;
    for (double x = 0.0; x < 3 * shape + 40; x += shape / 7 + 0.1) {
      const double q = reg_gamma_upper(shape, x);
      CHECK(std::abs(q - boost::math::gamma_q(shape, x)) <= 1e-12);
      CHECK(std::abs(reg_gamma_lower(shape, x) + q - 1.0) <= 1e-14);
      CHECK(q <= previous);
      previous = q;
    }
  }
}

TEST_CASE("marcum_q spot values and oracles") {
  CHECK(marcum_q(1, 3, 0) == 1.0);
  CHECK(marcum_q(1, 0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(std::abs(marcum_q(2, 1, 1) - marcum_poisson(2, 1, 1)) <= 1e-12);
  CHECK_THROWS_AS(marcum_q(1, -1, 1), std::domain_error);
  CHECK_THROWS_AS(marcum_q(1, 1, -1), std::domain_error);
  CHECK_THROWS_AS(marcum_q(0.5, 1, 1), std::domain_error);

  for (int m : {1, 2, 5, 20}) {
    for (double a : {0.0, 0.5, 2.0, 6.0}) {
      double previous = 1.0;
      for (double b = 0.0; b < a + 4.0 * std::sqrt(m) + 6.0; b += 0.25) {
        const double q = marcum_q(m, a, b);
        CHECK(std::abs(q - marcum_poisson(m, a, b)) <= 1e-9);
        CHECK(q <= previous + 1e-15);
        previous = q;
      }
    }
  }
}

TEST_CASE("marcum_q at zero noncentrality completes the central chi-square CDF") {
  for (int m : {1, 3, 8}) {
    const boost::math::chi_squared_distribution<double> central(2.0 * m);
    for (double b = 0.1; b < 10; b += 0.3) {
      CHECK(std::abs(marcum_q(m, 0, b) + boost::math::cdf(central, b * b) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("marcum_q against the noncentral chi-square tail at large noncentrality") {
  for (int m : {1, 4, 50}) {
    for (double a : {10.0, 30.0}) {
      const boost::math::non_central_chi_squared_distribution<double> dist(2.0 * m, a * a);
      for (double b : {a - 3.0, a, a + 2.0}) {
        CHECK(std::abs(marcum_q(m, a, b) - boost::math::cdf(boost::math::complement(dist, b * b))) <= 1e-9);
      }
    }
  }
}

TEST_CASE("quantile table examples") {
  const auto uniform = build_quantile_table([](double) { return 1.0; }, 0.0, 1.0, 4096);
  for (double u : {0.25, 0.5, 0.75}) CHECK(uniform.quantile(u) == doctest::Approx(u).epsilon(1e-6));

  const auto expo = build_quantile_table([](double x) { return std::exp(-x); }, 0.0, 40.0, 8192);
  CHECK(std::abs(expo.quantile(0.5) - std::log(2.0)) <= 1e-4);
  CHECK(expo.quantile(0.0) == expo.lo());
  CHECK(expo.quantile(1.0) == expo.hi());

  CHECK(expo.cdf_values().front() <= 1e-6);
  CHECK(expo.cdf_values().back() == 1.0);
  for (std::size_t i = 1; i < expo.grid().size(); ++i) {
    CHECK(expo.grid()[i] > expo.grid()[i - 1]);
    CHECK(expo.cdf_values()[i] >= expo.cdf_values()[i - 1]);
  }
}

TEST_CASE("quantile table round trip and truncation") {
  const std::size_t points = 2048;
  const auto table = build_quantile_table([](double x) { return 2.0 * x * std::exp(-x * x); }, 0.0, 12.0, points);
  for (double u = 0.0; u <= 1.0; u += 1.0 / 64) {
    CHECK(std::abs(table.cdf(table.quantile(u)) - u) <= 2.0 / points);
  }
  CHECK_THROWS_AS(build_quantile_table([](double x) { return std::exp(-x); }, 0.0, 2.0, 1024), TruncationError);
  CHECK_THROWS_AS(build_quantile_table([](double) { return 1.0; }, 0.0, 1.0, 100), std::domain_error);
}

TEST_CASE("integrate") {
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 50.0) == doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-12));
}
