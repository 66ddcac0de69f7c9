#pragma once

#include <stdexcept>
#include <string>

namespace ccurv {

/// Broad failure classes. The CLI maps them onto exit codes.
enum class ErrorKind {
  config,     ///< malformed input, invalid parameters, parse errors
  numerical,  ///< integrator failure, metric degeneracy, conjugacy crossed
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

}  // namespace ccurv
