#pragma once

#include <stdexcept>
#include <string>

namespace thermovalue {

// Failure categories. The numeric values are the CLI exit codes.
enum class ErrorKind : int {
  parse = 1,
  integrity = 2,
  insufficient_data = 3,
  argument = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

inline Error parse_error(const std::string& what) { return {ErrorKind::parse, what}; }
inline Error integrity_error(const std::string& what) { return {ErrorKind::integrity, what}; }
inline Error insufficient_data(const std::string& what) { return {ErrorKind::insufficient_data, what}; }
inline Error argument_error(const std::string& what) { return {ErrorKind::argument, what}; }

}  // namespace thermovalue
