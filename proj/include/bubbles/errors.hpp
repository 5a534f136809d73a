#pragma once

#include <stdexcept>
#include <string>

namespace bubbles {

// Root of the library's exception hierarchy. Each subclass corresponds to one
// named failure mode of an operation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndeterminateError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

class PeriodTooLargeError : public Error {
 public:
  using Error::Error;
};

class InvalidMapError : public Error {
 public:
  using Error::Error;
};

class ExcludedParameterError : public Error {
 public:
  using Error::Error;
};

class UnknownFamilyError : public Error {
 public:
  using Error::Error;
};

class InvalidWindowError : public Error {
 public:
  using Error::Error;
};

class OutOfWindowError : public Error {
 public:
  using Error::Error;
};

class DegenerateComponentError : public Error {
 public:
  using Error::Error;
};

class DegenerateSetError : public Error {
 public:
  using Error::Error;
};

class InsufficientScalesError : public Error {
 public:
  using Error::Error;
};

class WrongPeriodError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bubbles
