#pragma once

#include <stdexcept>
#include <string>

namespace casa {

// Root of every exception thrown by the library. The C API maps each
// subclass onto one error code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Signals of incompatible length or sample rate, or list-size mismatches.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A quantity is mathematically undefined (e.g. SDR against a silent reference).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inconsistent metric configuration, e.g. an input-level penalty without a mixture.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied value violates its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed file content (WAV chunks, manifest fields, report lines).
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace casa
