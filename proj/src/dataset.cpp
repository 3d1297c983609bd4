#include "l1net/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "l1net/textio.hpp"

namespace l1net {

Dataset sample_dataset(const TargetSpec& target, const DataDistribution& dist,
                       const NoiseSpec& noise, int n, std::uint64_t seed) {
  target.validate();
  dist.validate();
  noise.validate();
  if (n < 1) throw std::invalid_argument("sample_dataset: n must be >= 1");
  if (dist.d != target.d)
    throw std::invalid_argument("sample_dataset: dimension mismatch");

  Dataset data;
  data.n = n;
  data.d = dist.d;
  data.X.resize(static_cast<std::size_t>(n) * dist.d);
  data.y.resize(static_cast<std::size_t>(n));
  // Separate streams for inputs and noise keep the draws independent of n
  // ordering choices elsewhere.
  Rng x_rng(derive_seed(seed, {0}));
  Rng e_rng(derive_seed(seed, {1}));
  for (int i = 0; i < n; ++i) {
    double* row = data.X.data() + static_cast<std::size_t>(i) * dist.d;
    for (int t = 0; t < dist.d; ++t) {
      row[t] = dist.kind == DistKind::UniformBox ? x_rng.uniform(-dist.M, dist.M)
                                                 : x_rng.normal();
    }
    data.y[static_cast<std::size_t>(i)] =
        eval_target(target, data.x_row(i)) + noise.sample(e_rng);
  }
  return data;
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  for (int t = 0; t < data.d; ++t) out << "x" << (t + 1) << ",";
  out << "y\n";
  for (int i = 0; i < data.n; ++i) {
    auto row = data.x_row(i);
    for (int t = 0; t < data.d; ++t) out << fmt_g17(row[static_cast<std::size_t>(t)]) << ",";
    out << fmt_g17(data.y[static_cast<std::size_t>(i)]) << "\n";
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("dataset csv: empty input");
  std::vector<std::string> header = split(trim(line), ',');
  if (header.size() < 2 || header.back() != "y")
    throw std::runtime_error("dataset csv: bad header");
  int d = static_cast<int>(header.size()) - 1;
  for (int t = 0; t < d; ++t)
    if (header[static_cast<std::size_t>(t)] != "x" + std::to_string(t + 1))
      throw std::runtime_error("dataset csv: bad header column " +
                               header[static_cast<std::size_t>(t)]);
  Dataset data;
  data.d = d;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> parts = split(line, ',');
    if (parts.size() != static_cast<std::size_t>(d) + 1)
      throw std::runtime_error("dataset csv: line " + std::to_string(line_no) +
                               ": expected " + std::to_string(d + 1) +
                               " fields");
    for (std::size_t c = 0; c < parts.size(); ++c) {
      double v;
      if (!try_parse_double(trim(parts[c]), v))
        throw std::runtime_error("dataset csv: line " +
                                 std::to_string(line_no) + ": bad number '" +
                                 parts[c] + "'");
      if (c + 1 < parts.size())
        data.X.push_back(v);
      else
        data.y.push_back(v);
    }
    ++data.n;
  }
  return data;
}

void write_dataset_csv_file(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_dataset_csv(data, out);
}

Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dataset_csv(in);
}

}  // namespace l1net
