#ifndef HAMKIT_ERRORS_HPP
#define HAMKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hamkit {

/// Argument outside the domain an object is defined on. Carries the
/// offending coordinate.
class DomainError : public std::domain_error {
public:
  DomainError(const std::string& what, double coordinate)
      : std::domain_error(what), coordinate_(coordinate) {}

  double coordinate() const noexcept { return coordinate_; }

private:
  double coordinate_;
};

/// A function produced a non-finite value. `location` is where it was
/// evaluated.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& what, double location)
      : std::runtime_error(what), location_(location) {}

  double location() const noexcept { return location_; }

private:
  double location_;
};

/// A kernel whose theorem thresholds are not strictly positive.
class DegenerateKernelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or config text. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(format(message, line, column)), message_(message),
        line_(line), column_(column) {}

  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  static std::string format(const std::string& m, int line, int column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + m;
  }

  std::string message_;
  int line_;
  int column_;
};

} // namespace hamkit

#endif // HAMKIT_ERRORS_HPP
