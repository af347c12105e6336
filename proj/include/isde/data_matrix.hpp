#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace isde {

//! Dense row-major matrix of observations (one row per sample).
class DataMatrix
{
public:
  DataMatrix() = default;

  DataMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows)
    , cols_(cols)
    , values_(rows * cols, 0.0)
  {}

  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double operator()(std::size_t i, std::size_t j) const
  {
    return values_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j)
  {
    return values_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const
  {
    return { values_.data() + i * cols_, cols_ };
  }
  std::span<double> row(std::size_t i)
  {
    return { values_.data() + i * cols_, cols_ };
  }

  const std::vector<double>& values() const { return values_; }

  //! Rows [first, last) as a new matrix.
  DataMatrix slice_rows(std::size_t first, std::size_t last) const;

  //! Columns listed in `columns`, in that order.
  DataMatrix select_columns(std::span<const int> columns) const;

  bool operator==(const DataMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

//! Throws DataError naming the first entry outside [0,1] (or non-finite).
void require_unit_cube(const DataMatrix& data);

} // namespace isde
