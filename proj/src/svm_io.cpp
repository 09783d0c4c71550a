#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "coopsense/svm.hpp"
#include "coopsense/text_io.hpp"

namespace coopsense::svm {

namespace {

constexpr const char* kMagic = "svm_model v1";
constexpr const char* kHeaderEnd = "end_header";

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out += ',';
    out += text_io::format_double(values[k]);
  }
  return out;
}

std::vector<double> parse_list(const std::string& text, std::size_t expected) {
  std::vector<double> out;
  if (!text.empty()) {
    for (const auto& field : text_io::split(text, ',')) out.push_back(text_io::parse_double(field));
  }
  if (out.size() != expected) throw std::invalid_argument("svm model: vector length does not match dimension");
  return out;
}

}  // namespace

void write_model(std::ostream& out, const SvmModel& model) {
  out << kMagic << '\n';
  out << "kernel=" << model.kernel.name() << '\n';
  if (model.kernel.kind == KernelKind::kPolynomial) out << "degree=" << model.kernel.degree << '\n';
  if (model.kernel.kind == KernelKind::kRbf) out << "sigma=" << text_io::format_double(model.kernel.sigma) << '\n';
  out << "theta=" << text_io::format_double(model.theta) << '\n'
      << "bias=" << text_io::format_double(model.bias) << '\n'
      << "dimension=" << model.dimension << '\n'
      << "mean=" << join(model.standardization.mean) << '\n'
      << "scale=" << join(model.standardization.scale) << '\n'
      << "support_vectors=" << model.alphas.size() << '\n'
      << kHeaderEnd << '\n';
  for (std::size_t s = 0; s < model.alphas.size(); ++s) {
    out << text_io::format_double(model.alphas[s]) << ',' << model.sv_labels[s];
    for (double v : model.support_vectors[s]) out << ',' << text_io::format_double(v);
    out << '\n';
  }
}

SvmModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw std::invalid_argument("svm model: bad magic line");
  const auto kv = text_io::read_key_values(in, kHeaderEnd);
  using text_io::require_key;

  SvmModel model;
  model.kernel.kind = parse_kernel_kind(require_key(kv, "kernel"));
  if (model.kernel.kind == KernelKind::kPolynomial) {
    model.kernel.degree = static_cast<int>(text_io::parse_int(require_key(kv, "degree")));
  }
  if (model.kernel.kind == KernelKind::kRbf) model.kernel.sigma = text_io::parse_double(require_key(kv, "sigma"));
  model.kernel.validate();
  model.theta = text_io::parse_double(require_key(kv, "theta"));
  model.bias = text_io::parse_double(require_key(kv, "bias"));
  model.dimension = static_cast<std::size_t>(text_io::parse_int(require_key(kv, "dimension")));
  model.standardization.mean = parse_list(require_key(kv, "mean"), model.dimension);
  model.standardization.scale = parse_list(require_key(kv, "scale"), model.dimension);
  const auto count = static_cast<std::size_t>(text_io::parse_int(require_key(kv, "support_vectors")));

  for (std::size_t s = 0; s < count; ++s) {
    if (!std::getline(in, line)) throw std::invalid_argument("svm model: truncated support vector list");
    const auto fields = text_io::split(line, ',');
    if (fields.size() != model.dimension + 2) throw std::invalid_argument("svm model: bad support vector line");
    model.alphas.push_back(text_io::parse_double(fields[0]));
    model.sv_labels.push_back(static_cast<int>(text_io::parse_int(fields[1])));
    std::vector<double> sv;
    for (std::size_t k = 2; k < fields.size(); ++k) sv.push_back(text_io::parse_double(fields[k]));
    model.support_vectors.push_back(std::move(sv));
  }
  return model;
}

void save_model(const std::string& path, const SvmModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_model(out, model);
}

SvmModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_model(in);
}

}  // namespace coopsense::svm
