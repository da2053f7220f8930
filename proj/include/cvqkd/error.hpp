#pragma once

#include <stdexcept>
#include <string>

namespace cvqkd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

class FramingError : public Error {
 public:
  using Error::Error;
};

class EntropyExhausted : public Error {
 public:
  using Error::Error;
};

class RecoveryError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvqkd
