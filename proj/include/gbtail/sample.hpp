#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace gbtail {

/// Immutable ascending-ordered positive observations with a provenance tag.
/// Construct through from_values(), which sorts and validates.
class SortedSample {
 public:
  static SortedSample from_values(std::vector<double> values,
                                  std::string label);

  const Eigen::ArrayXd& values() const { return values_; }
  std::int64_t m() const { return values_.size(); }
  const std::string& label() const { return label_; }
  double min() const { return values_[0]; }
  double max() const { return values_[values_.size() - 1]; }

 private:
  SortedSample(Eigen::ArrayXd values, std::string label)
      : values_(std::move(values)), label_(std::move(label)) {}

  Eigen::ArrayXd values_;
  std::string label_;
};

}  // namespace gbtail
