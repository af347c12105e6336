#include "isde/data_matrix.hpp"

#include "isde/errors.hpp"

#include <cmath>

namespace isde {

DataMatrix::DataMatrix(std::size_t rows,
                       std::size_t cols,
                       std::vector<double> values)
  : rows_(rows)
  , cols_(cols)
  , values_(std::move(values))
{
  if (values_.size() != rows_ * cols_)
    throw StructuralError("matrix value count does not match its shape");
}

DataMatrix
DataMatrix::slice_rows(std::size_t first, std::size_t last) const
{
  if (first > last || last > rows_)
    throw StructuralError("row slice out of range");
  return DataMatrix(last - first,
                    cols_,
                    std::vector<double>(values_.begin() + first * cols_,
                                        values_.begin() + last * cols_));
}

DataMatrix
DataMatrix::select_columns(std::span<const int> columns) const
{
  DataMatrix out(rows_, columns.size());
  for (int c : columns)
    if (c < 0 || static_cast<std::size_t>(c) >= cols_)
      throw StructuralError("column index out of range");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < columns.size(); ++j)
      out(i, j) = (*this)(i, static_cast<std::size_t>(columns[j]));
  return out;
}

void
require_unit_cube(const DataMatrix& data)
{
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < data.cols(); ++j) {
      const double v = data(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        throw DataError("entry outside [0,1]", i + 1, j + 1);
    }
}

} // namespace isde
