#ifndef MSO_ERRORS_HPP
#define MSO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mso {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula or term text.  Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Element variable used where a set is expected or vice versa.
class KindError : public Error {
 public:
  using Error::Error;
};

class UnboundVariableError : public Error {
 public:
  using Error::Error;
};

/// Operation called outside its precondition (signature mismatch, empty-model
/// argument, depth too large, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A closure or enumeration grew past the configured element budget.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t size)
      : Error(what + " (size " + std::to_string(size) + " exceeds budget)"), size_(size) {}
  std::size_t size() const { return size_; }

 private:
  std::size_t size_;
};

}  // namespace mso

#endif  // MSO_ERRORS_HPP
