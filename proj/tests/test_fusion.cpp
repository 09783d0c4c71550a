#include <doctest.h>

#include <random>

#include "coopsense/fusion.hpp"
#include "coopsense/random.hpp"
#include "oracles.hpp"

using namespace coopsense;
using fusion::FusionRule;

TEST_CASE("local decisions") {
  CHECK(fusion::local_decision(0.0, 0.5) == -1);
  CHECK(fusion::local_decision(1.2, 1.0) == 1);
  CHECK(fusion::local_decision(1.0, 1.0) == -1);
}

TEST_CASE("voting rules") {
  const std::vector<int> one{-1, -1, 1}, two{1, 1, -1};
  CHECK(fusion::fuse(one, FusionRule::or_rule()) == 1);
  CHECK(fusion::fuse(two, FusionRule::and_rule(3)) == -1);
  CHECK(fusion::fuse(two, FusionRule{2}) == 1);
  CHECK_THROWS_AS(fusion::fuse(two, FusionRule{0}), std::invalid_argument);
  CHECK_THROWS_AS(fusion::fuse(two, FusionRule{4}), std::invalid_argument);
}

TEST_CASE("binomial system curve") {
  CHECK(fusion::fusion_system_curve(0.5, 0.1, 3, 1).pfa == doctest::Approx(0.271).epsilon(1e-14));
  CHECK(fusion::fusion_system_curve(0.9, 0.1, 2, 2).pd == doctest::Approx(0.81).epsilon(1e-14));
  CHECK(fusion::fusion_system_curve(0.5, 0.5, 3, 2).pd == doctest::Approx(0.5).epsilon(1e-14));

  for (std::size_t n : {1u, 3u, 6u}) {
    for (double p : {0.05, 0.3, 0.77}) {
      double prev_pd = 1.0, prev_pfa = 1.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const auto point = fusion::fusion_system_curve(p, p / 2, n, k);
        CHECK(point.pd == doctest::Approx(oracle::binomial_upper(n, k, p)).epsilon(1e-12));
        CHECK(point.pd <= prev_pd);
        CHECK(point.pfa <= prev_pfa);
        prev_pd = point.pd;
        prev_pfa = point.pfa;
      }
    }
  }
}

TEST_CASE("Monte Carlo voting matches the binomial tails") {
  const double pd = 0.7, pfa = 0.2;
  for (std::size_t k : {1u, 2u, 3u}) {
    RngStream rng(derive_seed(77, k));
    std::bernoulli_distribution hit(pd), false_alarm(pfa);
    int detected = 0, alarms = 0;
    const int events = 100000;
    std::vector<int> d(3);
    for (int e = 0; e < events; ++e) {
      for (auto& v : d) v = hit(rng) ? 1 : -1;
      detected += fusion::fuse(d, FusionRule{k}) == 1;
      for (auto& v : d) v = false_alarm(rng) ? 1 : -1;
      alarms += fusion::fuse(d, FusionRule{k}) == 1;
    }
    const auto want = fusion::fusion_system_curve(pd, pfa, 3, k);
    CHECK(std::abs(detected / double(events) - want.pd) <= 0.01);
    CHECK(std::abs(alarms / double(events) - want.pfa) <= 0.01);
  }
}

TEST_CASE("thresholding the k-th largest energy is k-out-of-n voting") {
  RngStream rng(4);
  std::exponential_distribution<double> energy(1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> e(4);
    for (auto& v : e) v = energy(rng);
    const double tau = energy(rng);
    std::vector<int> d(4);
    for (std::size_t n = 0; n < 4; ++n) d[n] = fusion::local_decision(e[n], tau);
    for (std::size_t k = 1; k <= 4; ++k) {
      CHECK((fusion::kth_largest(e, k) > tau) == (fusion::fuse(d, FusionRule{k}) == 1));
    }
  }
  CHECK_THROWS(fusion::kth_largest(std::vector<double>{1.0}, 2));
}
