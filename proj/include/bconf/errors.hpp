#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bconf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A jet operation left its domain (division by ~0, root of a non-positive value).
class DomainGuard : public Error {
 public:
  using Error::Error;
};

/// A derivative was requested beyond the retained truncation order.
class JetOrderError : public Error {
 public:
  using Error::Error;
};

/// Slot kind or dimension mismatch in a tensor operation.
class TensorShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// L <= 0, singular metric, or a computation failed at this point of the chart.
class InadmissibleSample : public Error {
 public:
  using Error::Error;
};

/// The change is degenerate at this sample (beta ~ 0, m ~ 0, epsilon ~ 0, f <= 0).
class DegenerateChange : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

/// The change does not satisfy the hypotheses of a named special case.
class CaseMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid run configuration. `field` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace bconf
