#ifndef GDFL_ERROR_HPP
#define GDFL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gdfl {

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes: InvalidArgument -> 1, data errors -> 2, divergence -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied parameters outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (files, graphs, dimensions).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public DataError {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : DataError("dimension mismatch: expected " + std::to_string(expected) +
                  ", got " + std::to_string(actual)) {}
};

// Exhaustive enumeration refused because the instance is too large.
class TooLarge : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class TrainingDiverged : public Error {
 public:
  explicit TrainingDiverged(std::size_t epoch)
      : Error("training diverged: non-finite loss at epoch " +
              std::to_string(epoch)),
        epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace gdfl

#endif  // GDFL_ERROR_HPP
