#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prefmine {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input data. The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Solver or oracle breakdown. The CLI maps these to exit code 3.
class InternalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : DataError(what) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateCost : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class UnknownEdge : public DataError {
 public:
  using DataError::DataError;
};

class NoPath : public DataError {
 public:
  using DataError::DataError;
};

class ZeroLength : public DataError {
 public:
  using DataError::DataError;
};

class EmptyGeometry : public DataError {
 public:
  using DataError::DataError;
};

/// A trajectory contains a single edge that fails the segmentation criterion.
class Unsegmentable : public DataError {
 public:
  Unsegmentable(const std::string& what, std::size_t position)
      : DataError(what), position_(position) {}

  /// Node position where the offending edge starts.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnsegmentableEdge : public Unsegmentable {
 public:
  using Unsegmentable::Unsegmentable;
};

class TooLarge : public DataError {
 public:
  using DataError::DataError;
};

class UnsortedInput : public DataError {
 public:
  using DataError::DataError;
};

class NoBreakPoints : public DataError {
 public:
  using DataError::DataError;
};

class NumericalFailure : public InternalError {
 public:
  using InternalError::InternalError;
};

class OracleDivergence : public InternalError {
 public:
  using InternalError::InternalError;
};

}  // namespace prefmine
