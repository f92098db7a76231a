#ifndef PENNING_ERRORS_HPP
#define PENNING_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace penning {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input; `field` names the offending config path when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string field = {})
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UnstableTrapError : public Error {
 public:
  using Error::Error;
};

class IndeterminateRegimeError : public Error {
 public:
  using Error::Error;
};

class SingularResponseError : public Error {
 public:
  using Error::Error;
};

/// Integration or root-matching failure in the oracle.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BranchAmbiguityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace penning

#endif
