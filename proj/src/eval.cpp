#include "coopsense/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace coopsense::eval {

namespace {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::domain_error("scores and labels differ in length");
  ClassCounts counts;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (std::isnan(scores[i])) throw std::domain_error("score is NaN");
    (labels[i] > 0 ? counts.positives : counts.negatives) += 1;
  }
  if (counts.positives == 0 || counts.negatives == 0) {
    throw std::domain_error("both classes are required for Pd/Pfa");
  }
  return counts;
}

}  // namespace

OperatingPoint pd_pfa_at(std::span<const double> scores, std::span<const int> labels, double threshold) {
  const ClassCounts counts = check_inputs(scores, labels);
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > threshold) (labels[i] > 0 ? tp : fp) += 1;
  }
  return {static_cast<double>(tp) / static_cast<double>(counts.positives),
          static_cast<double>(fp) / static_cast<double>(counts.negatives)};
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  const ClassCounts counts = check_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const double pos = static_cast<double>(counts.positives);
  const double neg = static_cast<double>(counts.negatives);
  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double level = scores[order[k]];
    for (; k < order.size() && scores[order[k]] == level; ++k) (labels[order[k]] > 0 ? tp : fp) += 1;
    curve.points.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
  }
  curve.auc = auc(curve);
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    area += (b.pfa - a.pfa) * 0.5 * (a.pd + b.pd);
  }
  return area;
}

double pd_at_pfa(const RocCurve& curve, double pfa) {
  const auto& pts = curve.points;
  if (pts.empty()) return 0.0;
  if (pfa >= pts.back().pfa) return pts.back().pd;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (pts[k].pfa <= pfa && pfa < pts[k + 1].pfa) {
      const double t = (pfa - pts[k].pfa) / (pts[k + 1].pfa - pts[k].pfa);
      return pts[k].pd + t * (pts[k + 1].pd - pts[k].pd);
    }
  }
  return pts.front().pd;
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "pfa,pd\n";
  for (const auto& p : curve.points) out << text_io::format_double(p.pfa) << ',' << text_io::format_double(p.pd) << '\n';
}

void write_roc_meta(std::ostream& out, const RocCurve& curve, const text_io::KeyValues& metadata) {
  out << "auc=" << text_io::format_double(curve.auc) << '\n';
  for (const auto& [key, value] : metadata) out << key << '=' << value << '\n';
}

}  // namespace coopsense::eval
