#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tpk {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes are incompatible (matmul, add, weight shapes, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A spatial extent is not a multiple of the downsampling factor.
class IndivisibleGridError : public Error {
 public:
  using Error::Error;
};

// Invalid argument values (non-positive extents, NaN inputs, bad config).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A token sequence does not follow the separator grammar.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error("parse error at element " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Base for on-disk format problems.
class FormatError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

// A stored tensor does not match the shape the config demands.
class ShapeMismatchError : public FormatError {
 public:
  ShapeMismatchError(std::string section, const std::string& what)
      : FormatError(what), section_(std::move(section)) {}

  const std::string& section() const { return section_; }

 private:
  std::string section_;
};

class MissingSectionError : public FormatError {
 public:
  explicit MissingSectionError(std::string section)
      : FormatError("missing weight section '" + section + "'"), section_(std::move(section)) {}

  const std::string& section() const { return section_; }

 private:
  std::string section_;
};

}  // namespace tpk
