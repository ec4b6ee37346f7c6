#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hoseeg {

/// Broad failure categories; the CLI maps each one to its own exit code.
enum class ErrorKind { io, parse, config, data, convergence };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Malformed input file. `line` is 1-based; 0 when the problem is not tied to a line.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(ErrorKind::parse, decorate(what, line, column)), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  static std::string decorate(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    std::string s = "line " + std::to_string(line);
    if (column != 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }
  std::size_t line_;
  std::size_t column_;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// Input that is well-formed but unusable (degenerate channel, single class, ...).
class DataError : public Error {
public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// An iterative solver stopped before meeting its tolerance. `residual` is the
/// last convergence measure (ICA row change, worst SVM KKT violation).
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorKind::convergence, what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace hoseeg
