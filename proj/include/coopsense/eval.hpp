#pragma once

// Detection/false-alarm rates, ROC curves and AUC for a scalar score.
//
// Conventions: a row is declared PU-present iff score > threshold;
// Pd = P[declared +1 | actual +1], Pfa = P[declared +1 | actual -1].

#include <iosfwd>
#include <span>
#include <vector>

#include "coopsense/text_io.hpp"

namespace coopsense::eval {

struct OperatingPoint {
  double pd = 0.0;
  double pfa = 0.0;
};

struct RocPoint {
  double pfa = 0.0;
  double pd = 0.0;
  bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) first, (1,1) last, both coordinates nondecreasing
  double auc = 0.0;
};

/// Throws std::domain_error when lengths differ or a class is missing.
OperatingPoint pd_pfa_at(std::span<const double> scores, std::span<const int> labels, double threshold);

/// Sweeps the threshold over every distinct score; tied scores form one step.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

/// Trapezoidal area under the stored points.
double auc(const RocCurve& curve);

/// Pd on the curve at the given Pfa, interpolating linearly between points.
double pd_at_pfa(const RocCurve& curve, double pfa);

void write_roc_csv(std::ostream& out, const RocCurve& curve);
/// `auc=` followed by the caller's metadata lines.
void write_roc_meta(std::ostream& out, const RocCurve& curve, const text_io::KeyValues& metadata);

}  // namespace coopsense::eval
