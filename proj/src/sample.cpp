#include "gbtail/sample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbtail {

SortedSample SortedSample::from_values(std::vector<double> values,
                                       std::string label) {
  if (values.empty()) {
    throw std::domain_error("SortedSample requires at least one value");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::domain_error(
          "SortedSample values must be positive and finite, got " +
          std::to_string(v));
    }
  }
  std::sort(values.begin(), values.end());
  Eigen::ArrayXd arr =
      Eigen::Map<const Eigen::ArrayXd>(values.data(), values.size());
  return SortedSample(std::move(arr), std::move(label));
}

}  // namespace gbtail
