#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isde {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Invalid numeric parameter (dimension, bandwidth, probability, ...).
class ParameterError : public Error
{
public:
  using Error::Error;
};

//! Input data violates the support or shape contract.
class DataError : public Error
{
public:
  DataError(const std::string& what, std::size_t row, std::size_t col)
    : Error(what + " (row " + std::to_string(row) + ", column " +
            std::to_string(col) + ")")
    , row_(row)
    , col_(col)
  {}

  explicit DataError(const std::string& what)
    : Error(what)
  {}

  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

private:
  std::size_t row_ = 0;
  std::size_t col_ = 0;
};

//! Inconsistent structure: overlapping blocks, missing table entries,
//! dimension mismatches.
class StructuralError : public Error
{
public:
  using Error::Error;
};

//! A bound was requested outside the regime where it is guaranteed.
class PreconditionError : public Error
{
public:
  using Error::Error;
};

//! A covariance matrix failed symmetric positive-definite factorization.
class FactorizationError : public ParameterError
{
public:
  using ParameterError::ParameterError;
};

} // namespace isde
