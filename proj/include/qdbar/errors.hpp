#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qdbar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor or operation argument violates a documented invariant.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The deformation parameter or an index is outside the admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A requested computation would exceed a configured size cap.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::int64_t needed)
      : Error(what), needed_(needed) {}
  std::int64_t needed() const noexcept { return needed_; }

 private:
  std::int64_t needed_;
};

/// Quadrature or iteration failed to reach its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double estimate, double achieved)
      : Error(what), estimate_(estimate), achieved_(achieved) {}
  double estimate() const noexcept { return estimate_; }
  double achieved_error() const noexcept { return achieved_; }

 private:
  double estimate_;
  double achieved_;
};

/// An operation needs a capability (e.g. an exact derivative) a value lacks.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdbar
