#include "algoprice/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace algoprice {

Matrix::Matrix(int k, std::vector<double> row_major) : k_(k), data_(std::move(row_major)) {
  if (k < 0 || data_.size() != static_cast<size_t>(k) * k) {
    throw std::invalid_argument("matrix data does not have K*K entries");
  }
}

double Matrix::min() const { return *std::min_element(data_.begin(), data_.end()); }

double Matrix::max() const { return *std::max_element(data_.begin(), data_.end()); }

}  // namespace algoprice
