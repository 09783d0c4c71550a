#pragma once

// Hard-decision cooperative baselines: OR, AND and K-out-of-N voting.

#include <cstddef>
#include <span>

#include "coopsense/eval.hpp"

namespace coopsense::fusion {

struct FusionRule {
  std::size_t k = 1;  // declare present iff at least k SUs do

  static FusionRule or_rule() { return {1}; }
  static FusionRule and_rule(std::size_t n) { return {n}; }
};

/// +1 iff energy > tau (a tie declares the band free).
int local_decision(double energy, double tau);

/// +1 iff at least rule.k of the decisions are +1. Throws
/// std::invalid_argument unless 1 <= k <= decisions.size().
int fuse(std::span<const int> decisions, FusionRule rule);

/// System (Pd, Pfa) of K-out-of-N voting over independent, identically
/// performing SUs: binomial upper tails at the local probabilities.
eval::OperatingPoint fusion_system_curve(double pd_local, double pfa_local, std::size_t n, std::size_t k);

/// k-th largest energy. Thresholding it at tau reproduces K-out-of-N fusion
/// of local decisions at tau, so its ROC is the rule's ROC over all
/// common local thresholds.
double kth_largest(std::span<const double> energies, std::size_t k);

}  // namespace coopsense::fusion
