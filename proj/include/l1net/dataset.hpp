#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "l1net/target.hpp"

namespace l1net {

struct Dataset {
  int n = 0;
  int d = 0;
  std::vector<double> X;  // n*d row-major
  std::vector<double> y;  // n

  std::span<const double> x_row(int i) const {
    return {X.data() + static_cast<std::size_t>(i) * d,
            static_cast<std::size_t>(d)};
  }
};

// y_i = f_*(x_i) + eps_i with x_i iid from dist and eps iid from noise.
// Same (seed, config) gives a bit-identical dataset.
Dataset sample_dataset(const TargetSpec& target, const DataDistribution& dist,
                       const NoiseSpec& noise, int n, std::uint64_t seed);

// CSV with header x1,...,xd,y and 17-significant-digit values.
void write_dataset_csv(const Dataset& data, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv_file(const Dataset& data, const std::string& path);
Dataset read_dataset_csv_file(const std::string& path);

}  // namespace l1net
