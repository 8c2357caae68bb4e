#ifndef DEPHASING_ERRORS_HPP
#define DEPHASING_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dephasing {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input: non-Hermitian matrix, non-unit state, dimension mismatch.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Bad config document (schema violation, unknown keys, missing fields).
class ConfigError : public Error {
public:
  using Error::Error;
};

// Violated numerical precondition (degenerate spectrum, unsorted times, ...).
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace dephasing

#endif
