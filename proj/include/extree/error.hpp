#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace extree {

enum class Errc {
  // Structural / input errors.
  WrongEdgeCount,
  SelfLoop,
  DuplicateEdge,
  Disconnected,
  NodeOutOfRange,
  DimensionMismatch,
  DimensionTooLarge,
  InvalidParameter,
  NegativeGamma,
  NotSymmetric,
  NegativeWeight,
  KOutOfRange,
  AllZeroWeights,
  ParseError,
  TooFewRows,
  NonNumericCell,
  IoError,
  // Numerical / degeneracy errors.
  NoFiniteTree,
  SamplerCapExceeded,
};

std::string_view errc_name(Errc code) noexcept;

/// True for codes that signal a numerical or degenerate-data condition rather
/// than malformed input. The CLI maps these to exit code 3.
bool is_numerical(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// ParseError / NonNumericCell carry the offending 1-based row and column.
class ParseFailure : public Error {
 public:
  ParseFailure(Errc code, std::size_t row, std::size_t col, const std::string& message)
      : Error(code, "row " + std::to_string(row) + ", column " + std::to_string(col) + ": " +
                        message),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace extree
