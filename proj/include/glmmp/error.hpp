#pragma once

#include <stdexcept>
#include <string>

namespace glmmp {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A message carried a NaN or an infinite mean.
class InvalidMessage : public Error {
public:
  using Error::Error;
};

/// A moment or sampling function was called outside its domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// The requested solver cannot handle the problem's channel.
class UnsupportedChannel : public Error {
public:
  using Error::Error;
};

/// Bad experiment or CLI configuration.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// The oracle integrand vanished on the integration window.
class DegeneratePosterior : public Error {
public:
  using Error::Error;
};

} // namespace glmmp
