#include "coopsense/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "coopsense/kernels.hpp"
#include "svm_internal.hpp"

namespace coopsense::svm {

void KernelSpec::validate() const {
  if (kind == KernelKind::kPolynomial && degree < 2) throw std::invalid_argument("polynomial kernel needs degree >= 2");
  if (kind == KernelKind::kRbf && !(sigma > 0.0)) throw std::invalid_argument("rbf kernel needs sigma > 0");
}

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::kLinear: return "linear";
    case KernelKind::kPolynomial: return "poly";
    case KernelKind::kRbf: return "rbf";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "linear") return KernelKind::kLinear;
  if (name == "poly" || name == "polynomial") return KernelKind::kPolynomial;
  if (name == "rbf") return KernelKind::kRbf;
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

FeatureMatrix to_matrix(const sensing::Dataset& data) {
  FeatureMatrix x(data.size(), data.dimension());
  for (std::size_t i = 0; i < data.size(); ++i) std::ranges::copy(data.rows[i].energies, x.row(i).begin());
  return x;
}

Standardization Standardization::identity(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

Standardization Standardization::fit(const FeatureMatrix& x) {
  Standardization s = identity(x.cols);
  if (x.rows == 0) return s;
  const double n = static_cast<double>(x.rows);
  for (std::size_t k = 0; k < x.cols; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) mean += x.row(i)[k];
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double d = x.row(i)[k] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / n);
    s.mean[k] = mean;
    s.scale[k] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
  }
  return s;
}

void Standardization::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = (in[k] - mean[k]) / scale[k];
}

FeatureMatrix Standardization::apply(const FeatureMatrix& x) const {
  FeatureMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) apply(x.row(i), out.row(i));
  return out;
}

namespace {

constexpr std::size_t kFullGramLimit = 4000;
constexpr double kTau = 1e-12;

// Kernel rows, either from a precomputed Gram matrix or recomputed on demand
// with a two-slot cache.
class KernelRows {
 public:
  KernelRows(const KernelSpec& kernel, const FeatureMatrix& x) : kernel_(kernel), x_(x), n_(x.rows) {
    if (n_ <= kFullGramLimit) {
      gram_ = gram_matrix(kernel, x);
    } else {
      slots_[0].resize(n_);
      slots_[1].resize(n_);
    }
    diag_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) diag_[i] = detail::kernel_unchecked(kernel, x.row(i), x.row(i));
  }

  std::span<const double> row(std::size_t i) {
    if (!gram_.empty()) return {gram_.data() + i * n_, n_};
    for (int s = 0; s < 2; ++s) {
      if (slot_index_[s] == i) {
        last_ = s;
        return slots_[s];
      }
    }
    const int s = 1 - last_;
    kernel_row(kernel_, x_, i, slots_[s]);
    slot_index_[s] = i;
    last_ = s;
    return slots_[s];
  }

  double diag(std::size_t i) const { return diag_[i]; }

 private:
  const KernelSpec& kernel_;
  const FeatureMatrix& x_;
  std::size_t n_;
  std::vector<double> gram_;
  std::vector<double> diag_;
  std::vector<double> slots_[2];
  std::size_t slot_index_[2] = {std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max()};
  int last_ = 1;
};

}  // namespace

SvmModel train_smo(const FeatureMatrix& raw, std::span<const int> labels, const KernelSpec& kernel,
                   const TrainOptions& options, TrainDiagnostics* diagnostics) {
  kernel.validate();
  if (!(options.theta > 0.0)) throw std::invalid_argument("train_smo: theta must be > 0");
  if (!(options.tol > 0.0)) throw std::invalid_argument("train_smo: tol must be > 0");
  if (labels.size() != raw.rows) throw std::invalid_argument("train_smo: label count mismatch");
  const std::size_t n = raw.rows;
  const bool has_pos = std::ranges::any_of(labels, [](int l) { return l > 0; });
  const bool has_neg = std::ranges::any_of(labels, [](int l) { return l < 0; });
  if (!has_pos || !has_neg) throw TrainingError("train_smo: training data contains a single class", {});

  const double c = options.theta;
  SvmModel model;
  model.kernel = kernel;
  model.theta = c;
  model.dimension = raw.cols;
  model.standardization = options.standardize ? Standardization::fit(raw) : Standardization::identity(raw.cols);
  const FeatureMatrix x = model.standardization.apply(raw);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] > 0 ? 1.0 : -1.0;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  KernelRows rows(kernel, x);

  auto in_up = [&](std::size_t t) { return y[t] > 0 ? alpha[t] < c : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < c; };
  auto objective = [&] {
    double w = 0.0;
    for (std::size_t t = 0; t < n; ++t) w += alpha[t] - 0.5 * alpha[t] * (grad[t] + 1.0);
    return w;
  };

  const std::size_t cap = options.max_iterations > 0 ? options.max_iterations : std::max<std::size_t>(10000000, 100 * n);
  TrainDiagnostics diag;
  std::size_t iter = 0;
  for (;; ++iter) {
    // First index: maximal violator in I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    // Second index: largest second-order decrease among violators in I_low.
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    if (i < n) {
      const auto ki = rows.row(i);
      for (std::size_t t = 0; t < n; ++t) {
        if (!in_low(t)) continue;
        const double yg = y[t] * grad[t];
        gmax2 = std::max(gmax2, yg);
        const double b = gmax + yg;
        if (b > 0.0) {
          double a = rows.diag(i) + rows.diag(t) - 2.0 * ki[t];
          if (a <= 0.0) a = kTau;
          const double obj = -(b * b) / a;
          if (obj < best) {
            best = obj;
            j = t;
          }
        }
      }
    }
    diag.iterations = iter;
    diag.max_violation = (i < n && j < n) ? gmax + gmax2 : 0.0;
    if (i >= n || j >= n || gmax + gmax2 < options.tol) break;
    if (iter >= cap) {
      diag.dual_objective = objective();
      std::ostringstream msg;
      msg << "train_smo: no convergence after " << iter << " iterations (violation " << diag.max_violation << ")";
      throw TrainingError(msg.str(), diag);
    }

    const std::vector<double> ki(rows.row(i).begin(), rows.row(i).end());
    const auto kj = rows.row(j);
    const double kij = ki[j];
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = rows.diag(i) + rows.diag(j) + 2.0 * (y[i] * y[j] * kij);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = rows.diag(i) + rows.diag(j) - 2.0 * (y[i] * y[j] * kij);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = (alpha[i] - old_i) * y[i];
    const double dj = (alpha[j] - old_j) * y[j];
    for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (ki[t] * di + kj[t] * dj);
  }
  diag.dual_objective = objective();

  // Bias from the free multipliers, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (ub + lb);
  model.bias = -rho;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_vectors.emplace_back(x.row(t).begin(), x.row(t).end());
      model.alphas.push_back(alpha[t]);
      model.sv_labels.push_back(y[t] > 0 ? 1 : -1);
    }
  }
  if (diagnostics != nullptr) *diagnostics = diag;
  return model;
}

SvmModel train_smo(const sensing::Dataset& data, const KernelSpec& kernel, const TrainOptions& options,
                   TrainDiagnostics* diagnostics) {
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const auto& row : data.rows) labels.push_back(row.label);
  return train_smo(to_matrix(data), labels, kernel, options, diagnostics);
}

double decision_value(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.dimension) throw std::domain_error("decision_value: dimension mismatch");
  std::vector<double> z(x.size());
  model.standardization.apply(x, z);
  return detail::score_standardized(model, z);
}

int classify(const SvmModel& model, std::span<const double> x) { return decision_value(model, x) >= 0.0 ? 1 : -1; }

double kkt_violation(const SvmModel& model, const sensing::Dataset& data) {
  std::map<std::pair<int, std::vector<double>>, std::vector<double>> pool;
  for (std::size_t s = 0; s < model.alphas.size(); ++s) {
    pool[{model.sv_labels[s], model.support_vectors[s]}].push_back(model.alphas[s]);
  }
  double worst = 0.0;
  std::vector<double> z(model.dimension);
  for (const auto& row : data.rows) {
    if (row.energies.size() != model.dimension) throw std::domain_error("kkt_violation: dimension mismatch");
    model.standardization.apply(row.energies, z);
    double alpha = 0.0;
    const auto it = pool.find({row.label, z});
    if (it != pool.end() && !it->second.empty()) {
      alpha = it->second.back();
      it->second.pop_back();
    }
    const double margin = row.label * detail::score_standardized(model, z);
    double violation = 0.0;
    if (alpha <= 0.0) {
      violation = std::max(0.0, 1.0 - margin);
    } else if (alpha < model.theta) {
      violation = std::abs(margin - 1.0);
    } else {
      violation = std::max(0.0, margin - 1.0);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

double dual_objective(const SvmModel& model) {
  const std::size_t s = model.alphas.size();
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t a = 0; a < s; ++a) {
    linear += model.alphas[a];
    for (std::size_t b = 0; b < s; ++b) {
      quad += model.alphas[a] * model.alphas[b] * model.sv_labels[a] * model.sv_labels[b] *
              detail::kernel_unchecked(model.kernel, model.support_vectors[a], model.support_vectors[b]);
    }
  }
  return linear - 0.5 * quad;
}

}  // namespace coopsense::svm
