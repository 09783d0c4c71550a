#include "coopsense/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace coopsense::fusion {

int local_decision(double energy, double tau) { return energy > tau ? 1 : -1; }

int fuse(std::span<const int> decisions, FusionRule rule) {
  if (rule.k < 1 || rule.k > decisions.size()) throw std::invalid_argument("fuse: k must be in [1, N]");
  const auto present = static_cast<std::size_t>(std::ranges::count(decisions, 1));
  return present >= rule.k ? 1 : -1;
}

namespace {

double binomial_tail(double p, std::size_t n, std::size_t k) {
  double tail = 0.0;
  double coeff = 1.0;  // C(n, j)
  for (std::size_t j = 0; j <= n; ++j) {
    if (j > 0) coeff = coeff * static_cast<double>(n - j + 1) / static_cast<double>(j);
    if (j >= k) {
      tail += coeff * std::pow(p, static_cast<double>(j)) * std::pow(1.0 - p, static_cast<double>(n - j));
    }
  }
  return std::clamp(tail, 0.0, 1.0);
}

}  // namespace

eval::OperatingPoint fusion_system_curve(double pd_local, double pfa_local, std::size_t n, std::size_t k) {
  if (!(pd_local >= 0.0 && pd_local <= 1.0) || !(pfa_local >= 0.0 && pfa_local <= 1.0)) {
    throw std::invalid_argument("fusion_system_curve: probabilities must be in [0, 1]");
  }
  if (k < 1 || k > n) throw std::invalid_argument("fusion_system_curve: k must be in [1, N]");
  return {binomial_tail(pd_local, n, k), binomial_tail(pfa_local, n, k)};
}

double kth_largest(std::span<const double> energies, std::size_t k) {
  if (k < 1 || k > energies.size()) throw std::invalid_argument("kth_largest: k must be in [1, N]");
  std::vector<double> sorted(energies.begin(), energies.end());
  std::ranges::nth_element(sorted, sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), std::greater<>());
  return sorted[k - 1];
}

}  // namespace coopsense::fusion
