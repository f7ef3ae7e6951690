#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace qsolve {

enum class ErrorCode {
  invalid_argument = 1,
  solver = 2,
  io = 3,
  parse = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

/// Expression or file-format error. `position` is a 0-based character offset when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::optional<std::size_t> position = {})
      : Error(ErrorCode::parse, position ? what + " at position " + std::to_string(*position) : what),
        position_(position) {}
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  std::optional<std::size_t> position_;
};

/// Numerical failure at a specific energy (and layer, when the recursion is at fault).
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double energy, std::optional<std::size_t> layer = {})
      : Error(ErrorCode::solver, describe(what, energy, layer)), energy_(energy), layer_(layer) {}
  double energy() const noexcept { return energy_; }
  std::optional<std::size_t> layer() const noexcept { return layer_; }

 private:
  static std::string describe(const std::string& what, double energy, std::optional<std::size_t> layer);
  double energy_;
  std::optional<std::size_t> layer_;
};

}  // namespace qsolve
