#pragma once

#include <vector>

namespace algoprice {

// Dense K x K matrix indexed (own price index, other price index).
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int k, double fill = 0.0) : k_(k), data_(static_cast<size_t>(k) * k, fill) {}
  Matrix(int k, std::vector<double> row_major);

  int size() const { return k_; }
  double& operator()(int own, int other) { return data_[static_cast<size_t>(own) * k_ + other]; }
  double operator()(int own, int other) const {
    return data_[static_cast<size_t>(own) * k_ + other];
  }
  const std::vector<double>& data() const { return data_; }

  double min() const;
  double max() const;

 private:
  int k_ = 0;
  std::vector<double> data_;
};

}  // namespace algoprice
