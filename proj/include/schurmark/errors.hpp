#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace schurmark {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not satisfy an operation's contract.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter lies outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input for which the requested statistic is undefined (e.g. a constant image).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or benchmark configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// QR iteration ran out of sweeps before the given subdiagonal entry converged.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::ptrdiff_t subdiagonal)
      : Error(what), subdiagonal_(subdiagonal) {}

  std::ptrdiff_t subdiagonal_index() const noexcept { return subdiagonal_; }

 private:
  std::ptrdiff_t subdiagonal_;
};

/// Malformed serialized input; `offset()` is the byte position of the fault.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace schurmark
