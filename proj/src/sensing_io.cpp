#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coopsense/sensing.hpp"
#include "coopsense/text_io.hpp"

namespace coopsense::sensing {

using text_io::format_double;

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const std::size_t dim = data.dimension();
  for (std::size_t j = 0; j < dim; ++j) out << "y_" << (j + 1) << ',';
  out << "label\n";
  for (const auto& row : data.rows) {
    for (double y : row.energies) out << format_double(y) << ',';
    out << row.label << '\n';
  }
}

void write_dataset_meta(std::ostream& out, const Dataset& data) {
  const auto& c = data.config;
  out << "alpha=" << format_double(c.fading.alpha) << '\n'
      << "kappa=" << format_double(c.fading.kappa) << '\n'
      << "mu=" << format_double(c.fading.mu) << '\n'
      << "gamma_bar_db=" << format_double(10.0 * std::log10(c.fading.gamma_bar)) << '\n'
      << "M=" << c.num_samples << '\n'
      << "N=" << c.num_sus << '\n'
      << "prior_h1=" << format_double(c.prior_h1) << '\n'
      << "L=" << data.size() << '\n'
      << "seed=" << data.seed << '\n';
}

void save_dataset(const std::string& csv_path, const Dataset& data) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  write_dataset_csv(csv, data);
  std::ofstream meta(csv_path + ".meta", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write " + csv_path + ".meta");
  write_dataset_meta(meta, data);
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset csv: missing header");
  const auto header = text_io::split(line, ',');
  if (header.size() < 2 || header.back() != "label") {
    throw std::invalid_argument("dataset csv: header must be y_1,...,y_N,label");
  }
  const std::size_t dim = header.size() - 1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j] != "y_" + std::to_string(j + 1)) throw std::invalid_argument("dataset csv: bad column " + header[j]);
  }

  Dataset data;
  data.config.num_sus = dim;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = text_io::split(line, ',');
    if (fields.size() != dim + 1) {
      throw std::invalid_argument("dataset csv: line " + std::to_string(line_no) + " has wrong field count");
    }
    EnergyVector row;
    row.energies.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) row.energies.push_back(text_io::parse_double(fields[j]));
    row.label = static_cast<int>(text_io::parse_int(fields[dim]));
    if (row.label != 1 && row.label != -1) {
      throw std::invalid_argument("dataset csv: line " + std::to_string(line_no) + " label must be 1 or -1");
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

Dataset load_dataset(const std::string& csv_path) {
  std::ifstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot read " + csv_path);
  Dataset data = read_dataset_csv(csv);

  std::ifstream meta(csv_path + ".meta", std::ios::binary);
  if (meta) {
    const auto kv = text_io::read_key_values(meta);
    auto get = [&](const std::string& key) { return text_io::parse_double(text_io::require_key(kv, key)); };
    data.config.fading.alpha = get("alpha");
    data.config.fading.kappa = get("kappa");
    data.config.fading.mu = get("mu");
    data.config.fading.gamma_bar = std::pow(10.0, get("gamma_bar_db") / 10.0);
    data.config.num_samples = static_cast<std::size_t>(text_io::parse_int(text_io::require_key(kv, "M")));
    data.config.prior_h1 = get("prior_h1");
    data.seed = static_cast<std::uint64_t>(std::stoull(text_io::require_key(kv, "seed")));
    const auto n = static_cast<std::size_t>(text_io::parse_int(text_io::require_key(kv, "N")));
    if (n != data.config.num_sus) throw std::invalid_argument("dataset meta: N does not match csv columns");
  }
  return data;
}

}  // namespace coopsense::sensing
